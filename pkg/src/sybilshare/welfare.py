"""Social cost, approximation ratios and Sybil welfare invariance."""
from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, islice
from typing import Iterable, Sequence

import numpy as np

from . import _batch
from .analysis import VERDICT_TAU, CheckReport, Grid
from .core import TAU, CostFunction, Outcome, check_bids, cost_of, format_money
from .mechanisms import MechanismId, as_mechanism, run_shapley
from .sybil import agent_utility, run_sybil_extension


def social_cost(C: CostFunction, served: Iterable[int], v: Sequence[float]) -> float:
    served = set(served)
    if not served <= set(range(len(v))):
        raise ValueError("served set must index into the valuation profile")
    return cost_of(C, len(served)) + math.fsum(x for i, x in enumerate(v) if i not in served)


def optimal_allocation(C: CostFunction, v: Sequence[float]) -> tuple[frozenset, float]:
    """Cost-minimising served set.  For symmetric costs some top-``k`` set by
    valuation is optimal; ties go to the larger set."""
    v = check_bids(v)
    order = sorted(range(len(v)), key=lambda i: -v[i])
    costs = [social_cost(C, order[:k], v) for k in range(len(v) + 1)]
    best = min(costs)
    best_k = max(k for k, pi in enumerate(costs) if pi <= best + TAU)
    served = frozenset(order[:best_k])
    return served, social_cost(C, served, v)


@dataclass(frozen=True)
class WelfareScore:
    allocation: frozenset
    social_cost: float
    optimal_cost: float
    ratio: float
    optimal_allocation: frozenset = frozenset()


def ratio_of(pi: float, pi_star: float) -> float:
    if pi_star <= TAU:
        return 1.0 if pi <= TAU else math.inf
    return pi / pi_star


def approx_ratio(mechanism, C: CostFunction, v: Sequence[float]) -> WelfareScore:
    """Score the mechanism's allocation under truthful bids against the optimum."""
    v = check_bids(v)
    out = as_mechanism(mechanism)(v, C)
    pi = social_cost(C, out.winners, v)
    opt_set, pi_star = optimal_allocation(C, v)
    return WelfareScore(out.winners, pi, pi_star, ratio_of(pi, pi_star), opt_set)


def sybil_social_cost(C: CostFunction, v: Sequence[float], profile, mechanism) -> float:
    """Social cost when agents report ``profile``: an agent counts as served if
    any of its identities is."""
    out = run_sybil_extension(mechanism, C, profile)
    return social_cost(C, out.served_agents, v)


# ---------------------------------------------------------------- worst case


@dataclass
class WorstCase:
    ratio: float
    witness: tuple
    unbounded: list = field(default_factory=list)
    cases_examined: int = 0
    elapsed: float = 0.0

    def __iter__(self):
        return iter((self.ratio, self.witness))


def witness_points(C: CostFunction, n: int, delta: float = 1e-6) -> list[float]:
    c1 = cost_of(C, 1)
    pts = [cost_of(C, i) / i - delta for i in range(1, n + 1)]
    pts += [c1 / 2 - delta, c1 - delta]
    return [p for p in pts if p > 0]


def _ratios_batch(mechanism, C, P):
    """Ratios for rows of valuation profiles ``P`` (sorted descending)."""
    N, n = P.shape
    res = _batch.evaluate(mechanism, P, C)
    if res is None:
        return np.array([approx_ratio(mechanism, C, list(row)).ratio for row in P])
    win = res[0]
    fk = np.array([cost_of(C, k) for k in range(n + 1)])
    pi = fk[win.sum(axis=1)] + np.where(win, 0.0, P).sum(axis=1)
    suffix = np.concatenate([np.cumsum(P[:, ::-1], axis=1)[:, ::-1], np.zeros((N, 1))], axis=1)
    pi_star = (fk[None, :] + suffix).min(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(pi_star > TAU, pi / np.where(pi_star > TAU, pi_star, 1.0),
                         np.where(pi <= TAU, 1.0, np.inf))
    return ratio


def worst_case_ratio(
    mechanism, C: CostFunction, n: int, grid: Grid, delta: float = 1e-6, chunk: int = 100_000
) -> WorstCase:
    """Largest ratio over all size-``n`` valuation multisets drawn from the
    grid (with zero) plus near-threshold witness points."""
    start = time.perf_counter()
    vals = sorted(set(grid.values(include_zero=True)) | set(witness_points(C, n, delta)))
    best, best_row, unbounded, examined = -math.inf, None, [], 0
    combos = combinations_with_replacement(vals[::-1], n)
    while True:
        rows = list(islice(combos, chunk))
        if not rows:
            break
        P = np.array(rows, dtype=float)
        r = _ratios_batch(mechanism, C, P)
        examined += len(rows)
        inf_rows = np.flatnonzero(~np.isfinite(r))
        unbounded.extend(tuple(float(x) for x in P[j]) for j in inf_rows[: max(0, 10 - len(unbounded))])
        finite = np.where(np.isfinite(r), r, -np.inf)
        j = int(np.argmax(finite))
        if finite[j] > best:
            best, best_row = float(finite[j]), tuple(float(x) for x in P[j])
    return WorstCase(best, best_row, unbounded, examined, time.perf_counter() - start)


def sweep_worst_case(mechanism, C: CostFunction, ns: Iterable[int], grid: Grid) -> list[dict]:
    rows = []
    name = MechanismId.parse(mechanism).value if isinstance(mechanism, (str, MechanismId)) else str(mechanism)
    for n in ns:
        wc = worst_case_ratio(mechanism, C, n, grid)
        rows.append({
            "n": n, "mechanism": name, "cost_kind": C.kind, "ratio": wc.ratio,
            "witness": wc.witness, "runtime_ms": wc.elapsed * 1000.0,
        })
    return rows


def sweep_to_csv(rows: Sequence[dict], timings: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "mechanism", "cost_kind", "ratio", "witness", "runtime_ms"])
    for r in rows:
        w.writerow([
            r["n"], r["mechanism"], r["cost_kind"], format_money(r["ratio"]),
            ";".join(format_money(x) for x in r["witness"]),
            format_money(r["runtime_ms"]) if timings else "",
        ])
    return buf.getvalue()


def run_all_or_none(bids: Sequence[float], c: float = 1.0) -> Outcome:
    """Non-excludable baseline: serve everyone iff every bid covers ``c/n``."""
    bids = check_bids(bids)
    n = len(bids)
    if n == 0 or min(bids) < c / n - TAU:
        return Outcome(frozenset(), (0.0,) * n)
    return Outcome(frozenset(range(n)), (c / n,) * n)


def nonexcludable_witness(n: int, eps: float) -> tuple[float, ...]:
    v = [1.0 - eps] * n
    v[n // 2] = 1.0 / n - eps
    return tuple(v)


# ---------------------------------------------------------------- B(v)


@dataclass(frozen=True)
class StrategySet:
    v: float
    strategies: tuple
    step: float

    def __len__(self):
        return len(self.strategies)

    def __iter__(self):
        return iter(self.strategies)

    def __contains__(self, item):
        return tuple(item) in self.strategies


def _slot_values(bound: float, step: float, positive: bool) -> list[float]:
    count = int(math.floor(bound / step + 1e-9))
    pts = {round(k * step, 12) for k in range(0 if not positive else 1, count + 1)}
    if bound > 0 and all(abs(p - bound) > TAU for p in pts):
        pts.add(bound)
    if not positive:
        pts.add(0.0)
    return sorted(p for p in pts if p <= bound + TAU and (p > 0 or not positive))


def enumerate_B(
    v: float, C: CostFunction, step: float, max_ids: int, include_zero_padding: bool = False
) -> StrategySet:
    """Representatives of the undominated Sybil strategies for valuation ``v``.

    Each is ``(v, x_2, ..., x_k)`` with ``x_l`` on the grid (or at its bound)
    in ``[0, min(v/l, f(1)/l)]`` and non-increasing.  Zero entries are padding
    and are dropped unless ``include_zero_padding``.
    """
    if step <= 0 or max_ids < 1:
        raise ValueError("step must be positive and max_ids at least 1")
    c1 = cost_of(C, 1)
    out = []

    def extend(prefix):
        out.append(tuple(prefix))
        l = len(prefix) + 1
        if l > max_ids:
            return
        bound = min(v / l, c1 / l)
        cap = prefix[-1] if l > 2 else bound
        for x in _slot_values(bound, step, positive=not include_zero_padding):
            if x <= cap + TAU:
                extend(prefix + [x])

    extend([float(v)])
    return StrategySet(float(v), tuple(sorted(set(out), key=lambda s: (len(s), s))), step)


def canonical_z(b: Sequence[float], v: float, C: CostFunction) -> tuple[float, ...]:
    """Map a bid list to the dominating representative: first entry ``v``,
    entry ``l`` capped at ``v/l`` and ``f(1)/l``."""
    b = sorted(check_bids(b), reverse=True)
    if not b:
        return (float(v),)
    c1 = cost_of(C, 1)
    return (float(v),) + tuple(min(x, v / l, c1 / l) for l, x in enumerate(b[1:], start=2))


# ---------------------------------------------------------------- SWI


def check_swi_shapley(
    C: CostFunction, v: Sequence[float], step: float, max_ids: int, chunk: int = 200_000
) -> CheckReport:
    """Sybil social cost never exceeds truthful Shapley social cost over all
    profiles of undominated strategies."""
    start = time.perf_counter()
    v = check_bids(v)
    n = len(v)
    truthful = run_shapley(v, C)
    pi_truth = social_cost(C, truthful.winners, v)
    if n == 0:
        return CheckReport("pass", None, 1, time.perf_counter() - start)

    sets = [enumerate_B(x, C, step, max_ids).strategies for x in v]
    width = max_ids
    mats = []
    for strategies in sets:
        M = np.zeros((len(strategies), width))
        for r, s in enumerate(strategies):
            M[r, : len(s)] = s
        mats.append(M)
    m = n * width
    if cost_of(C, m) / m <= TAU:
        raise ValueError("zero padding is not neutral for this cost function")

    fk = np.array([cost_of(C, k) for k in range(n + 1)])
    varr = np.array(v)
    sizes = [len(s) for s in sets]
    total = int(np.prod(sizes))
    examined = 0
    subset_violations = 0
    truth_mask = np.array([i in truthful.winners for i in range(n)])
    for lo in range(0, total, chunk):
        idx = np.arange(lo, min(total, lo + chunk))
        parts = np.unravel_index(idx, sizes)
        B = np.hstack([mats[a][parts[a]] for a in range(n)])
        first = np.tile(varr, (len(idx), 1))
        served, _ = _batch.shapley_served_agents(first, B, C)
        pi_sy = fk[served.sum(axis=1)] + np.where(served, 0.0, varr[None, :]).sum(axis=1)
        subset_violations += int((truth_mask[None, :] & ~served).any(axis=1).sum())
        bad = np.flatnonzero(pi_sy > pi_truth + VERDICT_TAU)
        examined += len(idx)
        if len(bad):
            j = int(bad[0])
            reports = [list(sets[a][parts[a][j]]) for a in range(n)]
            out = run_sybil_extension(MechanismId.SHAPLEY, C, reports)
            witness = {
                "kind": "swi",
                "valuations": list(v),
                "reports": reports,
                "sybil_social_cost": social_cost(C, out.served_agents, v),
                "truthful_social_cost": pi_truth,
            }
            return CheckReport("violated", witness, examined, time.perf_counter() - start)
    report = CheckReport("pass", None, examined, time.perf_counter() - start)
    if subset_violations:
        report.notes.append(f"{subset_violations} profiles served fewer agents than truthful play")
    if abs(cost_of(C, 1) - 1.0) > TAU:
        report.notes.append("strategy bounds use f(1)/l since f(1) != 1")
    return report


def best_response(
    mechanism, C: CostFunction, v_i: float, opponents, step: float, max_ids: int
) -> tuple[tuple, float]:
    """Best undominated Sybil strategy against fixed opponent bid lists.

    The responding agent is placed first.  Ties go to fewer identities, then
    to the lexicographically smaller bid list.
    """
    strategies = enumerate_B(v_i, C, step, max_ids).strategies
    opp = [tuple(o) if len(o) else (0.0,) for o in opponents]
    opp_flat = [x for o in opp for x in o]
    best_u, best_s = -math.inf, None
    by_len = {}
    for s in strategies:
        by_len.setdefault(len(s), []).append(s)
    for L in sorted(by_len):
        group = by_len[L]
        B = np.hstack([np.array(group, dtype=float), np.tile(opp_flat, (len(group), 1)).reshape(len(group), len(opp_flat))])
        res = _batch.evaluate(mechanism, B, C)
        if res is not None:
            win, pay = res
            util = v_i * win[:, :L].any(axis=1) - pay[:, :L].sum(axis=1)
        else:
            util = np.array([
                agent_utility(v_i, run_sybil_extension(mechanism, C, [s] + opp), 0) for s in group
            ])
        top = float(util.max())
        if top > best_u + 1e-12:
            best_u = top
            best_s = min(group[j] for j in np.flatnonzero(util >= top - 1e-12))
    return best_s, best_u
