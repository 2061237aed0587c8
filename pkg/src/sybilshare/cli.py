"""Command-line entry point: canned reproductions, config-driven analyses and reports."""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .analysis import (
    MAX_EXHAUSTIVE_IDENTITIES,
    Grid,
    check_sybil_proof,
    check_truthful,
)
from .core import CostFunction, cost_of, format_money, validate_cost_function
from .mechanisms import MechanismId, harmonic, run_mechanism
from .sybil import agent_utility, run_sybil_extension
from .welfare import (
    approx_ratio,
    check_swi_shapley,
    nonexcludable_witness,
    run_all_or_none,
    social_cost,
    optimal_allocation,
    sweep_to_csv,
    sweep_worst_case,
    witness_points,
)

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2
MODES = ("run", "check-truthful", "check-sybil", "worst-case", "swi", "reproduce")
CASES = (
    "vcg-sybil",
    "shapley-sybil",
    "potential-sybil",
    "osp-worst-case",
    "shapley-worst-case",
    "swi-shapley",
    "nonexcludable-baseline",
)
MAX_WORST_CASE_PROFILES = 20_000_000

CONFIG_KEYS = {
    "mode", "mechanism", "cost", "bids", "v", "valuations", "profile", "step", "max_value",
    "max_sybils", "n", "case", "out", "timings",
}


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------- formatting


def _plain(x):
    """Round floats to 12 significant digits for deterministic output."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        if not math.isfinite(x):
            return format_money(x)
        return float(f"{x:.12g}")
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, frozenset, set)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [_plain(v) for v in items]
    if hasattr(x, "item"):
        return _plain(x.item())
    return str(x)


def dumps(obj) -> str:
    return json.dumps(_plain(obj), sort_keys=True, indent=2) + "\n"


def _fmt_list(xs) -> str:
    return "[" + ", ".join(format_money(x) for x in xs) + "]"


# ---------------------------------------------------------------- config


@dataclass
class RunConfig:
    mode: str
    mechanism: str | None = None
    cost: CostFunction = field(default_factory=CostFunction.constant)
    valuations: tuple | None = None
    profile: list | None = None
    step: float | None = None
    max_value: float | None = None
    max_sybils: int = 1
    n: list | None = None
    case: str | None = None
    out: str | None = None
    timings: bool = False

    def grid(self, max_agents: int) -> Grid:
        step = self.step if self.step is not None else 0.05
        max_value = self.max_value if self.max_value is not None else _default_max_value(self.cost)
        ids = self.max_sybils * max_agents
        if ids > MAX_EXHAUSTIVE_IDENTITIES:
            raise ConfigError(
                f"max_sybils * n = {self.max_sybils} * {max_agents} = {ids} exceeds the exhaustive "
                f"cap of {MAX_EXHAUSTIVE_IDENTITIES} identities; lower max_sybils or n"
            )
        try:
            return Grid(step, max_value, self.max_sybils, max_agents)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None


def _default_max_value(C: CostFunction) -> float:
    return float(f"{1.2 * cost_of(C, 1):.12g}")


def parse_cost(spec) -> CostFunction:
    """Accept a dict (``{"kind": ..}``) or text such as ``constant:1`` / ``concave:0,1,1.5``."""
    try:
        if isinstance(spec, dict):
            C = CostFunction.from_dict(spec)
        else:
            kind, _, rest = str(spec).partition(":")
            if kind == "constant":
                C = CostFunction.constant(float(rest) if rest else 1.0)
            elif kind == "concave":
                C = CostFunction.concave([float(x) for x in rest.split(",") if x.strip()])
            else:
                raise ValueError(f"unknown cost kind {kind!r} (use constant:<c> or concave:<f0,f1,..>)")
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"cost: {exc}") from None
    report = validate_cost_function(C)
    if not report.ok:
        raise ConfigError("cost: " + "; ".join(report.problems))
    return C


def _floats(text, what) -> tuple:
    if isinstance(text, (list, tuple)):
        items = text
    else:
        items = [x for x in str(text).split(",") if x.strip()]
    try:
        out = tuple(float(x) for x in items)
    except (TypeError, ValueError):
        raise ConfigError(f"{what}: expected a list of numbers, got {text!r}") from None
    if any(not math.isfinite(x) or x < 0 for x in out):
        raise ConfigError(f"{what}: values must be finite and non-negative")
    return out


def _parse_profile(text) -> list:
    """``"0.25,0.25;0.32"`` or a list of lists: one bid list per agent."""
    if isinstance(text, str):
        groups = text.split(";")
    elif isinstance(text, list):
        groups = text
    else:
        raise ConfigError("profile: expected a list of bid lists")
    return [list(_floats(g, "profile")) for g in groups]


def _parse_ns(value) -> list:
    if isinstance(value, int) and not isinstance(value, bool):
        ns = [value]
    elif isinstance(value, list):
        ns = value
    else:
        text = str(value)
        if "-" in text:
            lo, _, hi = text.partition("-")
            try:
                ns = list(range(int(lo), int(hi) + 1))
            except ValueError:
                raise ConfigError(f"n: cannot parse range {text!r}") from None
        else:
            try:
                ns = [int(x) for x in text.split(",")]
            except ValueError:
                raise ConfigError(f"n: cannot parse {text!r}") from None
    if not ns or any(not isinstance(k, int) or k < 1 for k in ns):
        raise ConfigError("n: expected positive integers")
    return ns


def _line_context(text: str, lineno: int, colno: int) -> str:
    lines = text.splitlines() or [""]
    line = lines[min(lineno, len(lines)) - 1]
    return f"  {lineno} | {line}\n  {' ' * len(str(lineno))} | {' ' * (colno - 1)}^"


def _key_line(text: str, key: str) -> str:
    for i, line in enumerate(text.splitlines(), start=1):
        if f'"{key}"' in line:
            return f" (line {i}: {line.strip()})"
    return ""


def build_config(data: dict, source: str = "") -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(data) - CONFIG_KEYS)
    if unknown:
        raise ConfigError(f"unknown key {unknown[0]!r}{_key_line(source, unknown[0])}; "
                          f"allowed keys: {', '.join(sorted(CONFIG_KEYS))}")

    def ctx(key):
        return _key_line(source, key)

    mode = data.get("mode")
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {', '.join(MODES)}, got {mode!r}{ctx('mode')}")
    cfg = RunConfig(mode=mode)

    if "mechanism" in data:
        try:
            cfg.mechanism = MechanismId.parse(data["mechanism"]).value
        except ValueError as exc:
            raise ConfigError(f"{exc}{ctx('mechanism')}") from None
    if "cost" in data:
        try:
            cfg.cost = parse_cost(data["cost"])
        except ConfigError as exc:
            raise ConfigError(f"{exc}{ctx('cost')}") from None
    for key in ("bids", "v", "valuations"):
        if key in data:
            try:
                cfg.valuations = _floats(data[key], key)
            except ConfigError as exc:
                raise ConfigError(f"{exc}{ctx(key)}") from None
    if "profile" in data:
        cfg.profile = _parse_profile(data["profile"])
    for key, conv in (("step", float), ("max_value", float), ("max_sybils", int)):
        if key in data:
            try:
                val = conv(data[key])
            except (TypeError, ValueError):
                raise ConfigError(f"{key}: expected a number{ctx(key)}") from None
            if not val > 0:
                raise ConfigError(f"{key}: must be positive{ctx(key)}")
            setattr(cfg, key, val)
    if "n" in data:
        cfg.n = _parse_ns(data["n"])
    cfg.case = data.get("case")
    cfg.out = data.get("out")
    cfg.timings = bool(data.get("timings", False))
    _require(cfg)
    return cfg


def _require(cfg: RunConfig) -> None:
    m = cfg.mode
    if m in ("run", "check-truthful", "check-sybil", "worst-case") and cfg.mechanism is None:
        raise ConfigError(f"mode {m!r} needs a mechanism")
    if m == "run" and cfg.valuations is None and cfg.profile is None:
        raise ConfigError("mode 'run' needs bids (or a Sybil profile)")
    if m == "worst-case" and cfg.n is None:
        raise ConfigError("mode 'worst-case' needs n")
    if m == "swi":
        if cfg.valuations is None:
            raise ConfigError("mode 'swi' needs valuations v")
        if cfg.mechanism not in (None, MechanismId.SHAPLEY.value):
            raise ConfigError("mode 'swi' is defined for the shapley mechanism only")
        if cfg.max_sybils * len(cfg.valuations) > MAX_EXHAUSTIVE_IDENTITIES:
            raise ConfigError(
                f"max_sybils * n exceeds the exhaustive cap of {MAX_EXHAUSTIVE_IDENTITIES}; "
                "lower max_sybils or use fewer agents"
            )
    if m == "reproduce" and cfg.case not in CASES + ("all",):
        raise ConfigError(f"unknown case {cfg.case!r}; choose from {', '.join(CASES)} or 'all'")
    if m in ("check-truthful", "check-sybil") and cfg.valuations is not None:
        if cfg.max_sybils * len(cfg.valuations) > MAX_EXHAUSTIVE_IDENTITIES:
            raise ConfigError(
                f"max_sybils * n exceeds the exhaustive cap of {MAX_EXHAUSTIVE_IDENTITIES}; "
                "lower max_sybils or use fewer agents"
            )


def load_config(path: str) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}\n{_line_context(text, exc.lineno, exc.colno)}"
        ) from None
    return build_config(data, text)


# ---------------------------------------------------------------- execution


def _write(cfg: RunConfig, report: dict, csv_text: str | None = None) -> None:
    if not cfg.out:
        return
    path = Path(cfg.out)
    if csv_text is not None and path.suffix == ".csv":
        path.write_text(csv_text)
        path.with_suffix(".json").write_text(dumps(report))
    else:
        path.write_text(dumps(report))
        if csv_text is not None:
            path.with_suffix(".csv").write_text(csv_text)


def do_run(cfg: RunConfig) -> int:
    C = cfg.cost
    mech = MechanismId(cfg.mechanism)
    if cfg.profile is not None:
        out = run_sybil_extension(mech, C, cfg.profile)
        report = {
            "mode": "run", "mechanism": mech.value, "cost": C.to_dict(), "profile": cfg.profile,
            "served_agents": sorted(out.served_agents), "agent_payments": list(out.payments),
            "identity_winners": sorted(out.outcome.winners),
            "identity_payments": list(out.outcome.payments),
        }
        print(f"served agents {sorted(out.served_agents)} payments {_fmt_list(out.payments)}")
    else:
        bids = cfg.valuations
        out = run_mechanism(mech, bids, C)
        winners = sorted(out.winners)
        opt, pi_star = optimal_allocation(C, bids)
        pi = social_cost(C, out.winners, bids)
        report = {
            "mode": "run", "mechanism": mech.value, "cost": C.to_dict(), "bids": list(bids),
            "winners": winners, "payments": list(out.payments),
            "social_cost": pi, "optimal_cost": pi_star,
            "ratio": approx_ratio(mech, C, bids).ratio,
        }
        print(f"winners {winners} payments {_fmt_list(out.payments)}")
    _write(cfg, report)
    return EXIT_OK


def do_check(cfg: RunConfig) -> int:
    C = cfg.cost
    mech = MechanismId(cfg.mechanism)
    if cfg.valuations is not None:
        n = len(cfg.valuations)
        grid = cfg.grid(max(1, n))
        profiles = [cfg.valuations]
    else:
        n = max(cfg.n) if cfg.n else 3
        grid = cfg.grid(n)
        profiles = None
    check = check_truthful if cfg.mode == "check-truthful" else check_sybil_proof
    try:
        report = check(mech, C, grid, profiles=profiles)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    body = {
        "mode": cfg.mode, "mechanism": mech.value, "cost": C.to_dict(),
        "grid": {"step": grid.step, "max_value": grid.max_value,
                 "max_sybils": grid.max_sybils, "max_agents": grid.max_agents},
        **report.to_dict(include_timing=cfg.timings),
    }
    _write(cfg, body)
    if report.passed:
        print(f"{cfg.mode} {mech.value}: pass ({report.cases_examined} deviations examined)")
        return EXIT_OK
    w = report.witness
    print(f"{cfg.mode} {mech.value}: violated; valuations {_fmt_list(w['valuations'])} "
          f"agent {w['agent']} reports {_fmt_list(w['reports'][w['agent']])} gain {format_money(w['gain'])}")
    return EXIT_VIOLATION


def do_worst_case(cfg: RunConfig) -> int:
    C = cfg.cost
    mech = MechanismId(cfg.mechanism)
    step = cfg.step if cfg.step is not None else 0.05
    max_value = cfg.max_value if cfg.max_value is not None else float(f"{cost_of(C, 1):.12g}")
    try:
        grid = Grid(step, max_value)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    for n in cfg.n:
        size = len(set(grid.values(include_zero=True)) | set(witness_points(C, n)))
        count = math.comb(size + n - 1, n)
        if count > MAX_WORST_CASE_PROFILES:
            raise ConfigError(
                f"n={n} with step {step} needs {count} profiles (cap {MAX_WORST_CASE_PROFILES}); "
                "increase step, lower max_value or lower n"
            )
    try:
        rows = sweep_worst_case(mech, C, cfg.n, grid)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    csv_text = sweep_to_csv(rows, timings=cfg.timings)
    if not cfg.timings:
        for r in rows:
            r.pop("runtime_ms")
    body = {"mode": "worst-case", "mechanism": mech.value, "cost": C.to_dict(),
            "step": step, "max_value": max_value, "rows": rows}
    _write(cfg, body, csv_text)
    for r in rows:
        print(f"n={r['n']} ratio {format_money(r['ratio'])} witness {_fmt_list(r['witness'])}")
    return EXIT_OK


def do_swi(cfg: RunConfig) -> int:
    C = cfg.cost
    step = cfg.step if cfg.step is not None else 0.05
    max_ids = cfg.max_sybils
    try:
        report = check_swi_shapley(C, cfg.valuations, step, max_ids)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    body = {"mode": "swi", "mechanism": "shapley", "cost": C.to_dict(), "v": list(cfg.valuations),
            "step": step, "max_sybils": max_ids, **report.to_dict(include_timing=cfg.timings)}
    _write(cfg, body)
    if report.passed:
        print(f"swi: pass ({report.cases_examined} strategy profiles examined)")
        return EXIT_OK
    w = report.witness
    print(f"swi: violated; reports {w['reports']} sybil cost {format_money(w['sybil_social_cost'])} "
          f"> truthful cost {format_money(w['truthful_social_cost'])}")
    return EXIT_VIOLATION


# ---------------------------------------------------------------- reproductions


def _sybil_utils(mech, values, reports, agent=0):
    C = CostFunction.constant(1.0)
    truthful = agent_utility(values[agent], run_sybil_extension(mech, C, [[v] for v in values]), agent)
    out = run_sybil_extension(mech, C, reports)
    return truthful, agent_utility(values[agent], out, agent), out


def _case_vcg():
    v = (1 / 3, 1 / 3)
    t, s, _ = _sybil_utils(MechanismId.VCG, v, [[1 / 3, 1.0, 1.0], [1 / 3]])
    return [("truthful utility", 0.0, t, 1e-9), ("sybil utility", 1 / 3, s, 1e-9)]


def _case_shapley():
    e = 0.01
    v = (1 + e, 1 / 3 - e, 1 / 3 - e)
    t, s, _ = _sybil_utils(MechanismId.SHAPLEY, v, [[0.25, 0.25], [1 / 3 - e], [1 / 3 - e]])
    return [("truthful utility", e, t, 1e-9), ("sybil utility", 0.5 + e, s, 1e-9)]


def potential_sybil(n: int, eps: float):
    """Agent 1 values 1+eps, agent i values 1/i - eps; agent 1 adds a second
    identity bidding 1+eps.  Returns (truthful utility, sybil utility, sybil
    identity payment)."""
    v = [1 + eps] + [1 / i - eps for i in range(2, n + 1)]
    reports = [[1 + eps, 1 + eps]] + [[x] for x in v[1:]]
    t, s, out = _sybil_utils(MechanismId.POTENTIAL, v, reports)
    return t, s, out.outcome.payments[1]


def _case_potential():
    n, e = 4, 0.001
    t, s, pay = potential_sybil(n, e)
    _, s_small, _ = potential_sybil(n, 1e-5)
    return [
        ("truthful utility", e, t, 1e-9),
        ("sybil identity payment", 1 / (n + 1) - 2 * e, pay, 1e-9),
        ("sybil utility limit (eps=1e-5)", 1 - 1 / (n + 1), s_small, 1e-2),
    ], [
        f"closed form of the Clarke payment: 1/(n+1) + (n-1)*eps = {format_money(1 / (n + 1) + (n - 1) * e)}",
        f"sybil utility at eps=1e-3: {format_money(s)} (limit 1 - 2/(n+1) = {format_money(1 - 2 / (n + 1))})",
    ]


def _case_worst(mech, expected):
    C = CostFunction.constant(1.0)
    grid = Grid(0.1, 1.0)
    rows = sweep_worst_case(mech, C, range(2, 7), grid)
    checks = []
    for r in rows:
        n = r["n"]
        checks.append((f"n={n} worst ratio", expected(n), r["ratio"], (-0.01, 1e-7)))
    return checks


def _case_swi():
    e = 0.01
    checks = []
    for C in (CostFunction.constant(1.0), CostFunction.concave([0, 1, 1.4, 1.7, 1.9])):
        rep = check_swi_shapley(C, (1 + e, 1 / 3 - e, 1 / 3 - e), 0.05, 3)
        checks.append((f"violations ({C.kind})", 0.0, 0.0 if rep.passed else 1.0, 0.0))
    return checks


def _case_nonexcludable():
    checks = []
    eps = 1e-3
    C = CostFunction.constant(1.0)
    for n in range(2, 7):
        v = nonexcludable_witness(n, eps)
        out = run_all_or_none(v)
        _, pi_star = optimal_allocation(C, v)
        ratio = social_cost(C, out.winners, v) / pi_star
        bound = n - 1 + 1 / n - 0.01
        checks.append((f"n={n} ratio >= n-1+1/n-0.01", bound, ratio, (0.0, math.inf)))
    return checks


def run_case(case: str):
    """Return ``(checks, notes)``; each check is (label, expected, observed, tol)."""
    notes = []
    if case == "vcg-sybil":
        checks = _case_vcg()
    elif case == "shapley-sybil":
        checks = _case_shapley()
    elif case == "potential-sybil":
        checks, notes = _case_potential()
    elif case == "osp-worst-case":
        checks = _case_worst(MechanismId.OPTIMAL_SYBIL_PROOF, lambda n: (n + 1) / 2)
    elif case == "shapley-worst-case":
        checks = _case_worst(MechanismId.SHAPLEY, harmonic)
    elif case == "swi-shapley":
        checks = _case_swi()
    elif case == "nonexcludable-baseline":
        checks = _case_nonexcludable()
    else:
        raise ConfigError(f"unknown case {case!r}; choose from {', '.join(CASES)}")
    return checks, notes


def _within(expected, observed, tol) -> bool:
    if isinstance(tol, tuple):
        lo, hi = tol
        return expected + lo <= observed <= expected + hi
    return abs(observed - expected) <= tol


def do_reproduce(cfg: RunConfig) -> int:
    cases = CASES if cfg.case == "all" else (cfg.case,)
    status = EXIT_OK
    report = {}
    for case in cases:
        checks, notes = run_case(case)
        rows = []
        for label, expected, observed, tol in checks:
            ok = _within(expected, observed, tol)
            status = status if ok else EXIT_VIOLATION
            print(f"{case}: {label}: expected {format_money(expected)} observed {format_money(observed)} "
                  f"{'ok' if ok else 'MISMATCH'}")
            rows.append({"label": label, "expected": expected, "observed": observed, "ok": ok})
        for note in notes:
            print(f"{case}: note: {note}")
        report[case] = {"checks": rows, "notes": notes}
    _write(cfg, {"mode": "reproduce", "cases": report})
    return status


DISPATCH = {
    "run": do_run,
    "check-truthful": do_check,
    "check-sybil": do_check,
    "worst-case": do_worst_case,
    "swi": do_swi,
    "reproduce": do_reproduce,
}


def run_config(cfg: RunConfig) -> int:
    return DISPATCH[cfg.mode](cfg)


# ---------------------------------------------------------------- argparse


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sybilshare", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, mechanism=True):
        sp.add_argument("--config", help="JSON run configuration")
        if mechanism:
            sp.add_argument("--mechanism", help="vcg, shapley, potential, osp or hybrid")
        sp.add_argument("--cost", default=None, help="constant:<c> or concave:<f0,f1,...>")
        sp.add_argument("--out", help="write the JSON report (and CSV for sweeps) here")
        sp.add_argument("--timings", action="store_true", help="include wall-clock timings in reports")

    sp = sub.add_parser("run", help="run a mechanism on one bid vector or Sybil profile")
    common(sp)
    sp.add_argument("--bids", help="comma-separated identity bids")
    sp.add_argument("--profile", help="Sybil profile, agents separated by ';' e.g. 0.25,0.25;0.32")

    sp = sub.add_parser("check", help="search for truthfulness or Sybil-proofness violations")
    common(sp)
    sp.add_argument("--property", choices=["truthful", "sybil"], default="sybil")
    sp.add_argument("--bids", help="check only this valuation profile")
    sp.add_argument("--step", type=float)
    sp.add_argument("--max-value", type=float)
    sp.add_argument("--max-sybils", type=int)
    sp.add_argument("--n", help="number of agents for the grid search")

    sp = sub.add_parser("worst-case", help="worst-case approximation ratio sweep")
    common(sp)
    sp.add_argument("--n", help="agent counts, e.g. 5, 2-6 or 2,4")
    sp.add_argument("--step", type=float)
    sp.add_argument("--max-value", type=float)

    sp = sub.add_parser("swi", help="Sybil welfare invariant check for Shapley")
    common(sp, mechanism=False)
    sp.add_argument("--bids", help="valuation profile v")
    sp.add_argument("--step", type=float)
    sp.add_argument("--max-sybils", type=int)

    sp = sub.add_parser("reproduce", help="run a canned reproduction case")
    sp.add_argument("case", nargs="?", help=", ".join(CASES) + " or all")
    sp.add_argument("--config", help="JSON run configuration")
    sp.add_argument("--out")
    return p


def _config_from_args(args) -> RunConfig:
    if args.config:
        cfg = load_config(args.config)
        expected = {"run": ("run",), "check": ("check-truthful", "check-sybil"),
                    "worst-case": ("worst-case",), "swi": ("swi",), "reproduce": ("reproduce",)}
        if cfg.mode not in expected[args.command]:
            raise ConfigError(f"config mode {cfg.mode!r} does not match subcommand {args.command!r}")
        if getattr(args, "out", None):
            cfg.out = args.out
        if getattr(args, "timings", False):
            cfg.timings = True
        return cfg

    data = {}
    cmd = args.command
    if cmd == "check":
        data["mode"] = "check-truthful" if args.property == "truthful" else "check-sybil"
    else:
        data["mode"] = cmd
    for key in ("mechanism", "cost", "bids", "profile", "step", "max_value", "max_sybils", "n", "out"):
        val = getattr(args, key, None)
        if val is not None:
            data[key] = val
    if cmd == "reproduce":
        data["case"] = args.case
    if getattr(args, "timings", False):
        data["timings"] = True
    return build_config(data)


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = _config_from_args(args)
        return run_config(cfg)
    except ConfigError as exc:
        print(f"sybilshare: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
