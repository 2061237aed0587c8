"""Axiom checkers that either pass or return a concrete, replayable witness."""
from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product
from typing import Sequence

import numpy as np

from . import _batch
from .core import TAU, CostFunction, cost_of
from .mechanisms import MechanismId, as_mechanism
from .sybil import agent_utility, run_sybil_extension

VERDICT_TAU = 1e-7
MAX_EXHAUSTIVE_IDENTITIES = 12


class MonotonicityError(ValueError):
    """An identity wins at some bid and loses at a higher one."""

    def __init__(self, winning_bid: float, losing_bid: float):
        self.winning_bid = winning_bid
        self.losing_bid = losing_bid
        super().__init__(
            f"non-monotone win region: wins at {winning_bid:.12g}, loses at {losing_bid:.12g}"
        )


@dataclass(frozen=True)
class Grid:
    step: float
    max_value: float
    max_sybils: int = 1
    max_agents: int = 3

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("grid step must be positive")
        if self.step > self.max_value + TAU:
            raise ValueError("grid step exceeds max_value")
        if self.max_sybils < 1 or self.max_agents < 1:
            raise ValueError("max_sybils and max_agents must be at least 1")
        if self.max_sybils * self.max_agents > MAX_EXHAUSTIVE_IDENTITIES:
            raise ValueError(
                f"max_sybils * max_agents must be <= {MAX_EXHAUSTIVE_IDENTITIES} for exhaustive search"
            )

    def values(self, include_zero: bool = False) -> tuple[float, ...]:
        count = int(math.floor(self.max_value / self.step + 1e-9))
        vals = [round(k * self.step, 12) for k in range(1, count + 1)]
        return tuple([0.0] + vals if include_zero else vals)


@dataclass
class CheckReport:
    verdict: str
    witness: dict | None = None
    cases_examined: int = 0
    elapsed: float = 0.0
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self, include_timing: bool = True) -> dict:
        out = {
            "verdict": self.verdict,
            "witness": self.witness,
            "cases_examined": self.cases_examined,
        }
        if include_timing:
            out["elapsed_ms"] = round(self.elapsed * 1000.0, 3)
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def worker_count() -> int:
    try:
        wanted = int(os.environ.get("SYBILSHARE_THREADS", "1"))
    except ValueError:
        wanted = 1
    return max(1, min(wanted, os.cpu_count() or 1))


def _mechanism_key(mechanism):
    """Picklable handle for worker processes, or ``None`` for custom callables."""
    try:
        return MechanismId.parse(mechanism).value
    except (ValueError, TypeError):
        return None


# ---------------------------------------------------------------- deviations


def _utility(mechanism, C, values, profile, agent):
    out = run_sybil_extension(mechanism, C, profile)
    return agent_utility(values[agent], out, agent)


def _truthful_profile(values):
    return [(v,) for v in values]


def replay_gain(mechanism, C: CostFunction, witness: dict) -> float:
    """Recompute a deviation witness; returns deviating minus truthful utility."""
    values = witness["valuations"]
    agent = witness["agent"]
    truthful = _utility(mechanism, C, values, _truthful_profile(values), agent)
    deviating = _utility(mechanism, C, values, witness["reports"], agent)
    return deviating - truthful


def _deviation_options(v, grid: Grid, c1: float, specials: bool, include_zero: bool):
    pts = set(grid.values(include_zero=include_zero))
    if specials:
        pts.update(p for p in (v, v / 2, v / 3, c1, c1 + grid.step) if p > 0)
    else:
        pts.add(v)
    return sorted(pts)


def _deviation_lists(options, max_ids):
    lists = []
    for L in range(1, max_ids + 1):
        for combo in combinations_with_replacement(options, L):
            lists.append(tuple(sorted(combo, reverse=True)))
    return lists


def _search_profile(mechanism, C, values, agent, deviations, batched=True):
    """Best deviation for ``agent`` against truthful opponents.

    Returns ``(gain, deviation)`` with ties broken toward fewer identities,
    then the lexicographically smaller bid list.
    """
    truthful = _utility(mechanism, C, values, _truthful_profile(values), agent)
    left = list(values[:agent])
    right = list(values[agent + 1 :])
    v = values[agent]
    best_gain, best_dev = -math.inf, None

    by_len = {}
    for d in deviations:
        by_len.setdefault(len(d), []).append(d)
    for L in sorted(by_len):
        devs = by_len[L]
        result = None
        if batched:
            D = np.array(devs, dtype=float)
            B = np.hstack(
                [np.tile(left, (len(devs), 1)).reshape(len(devs), len(left)), D,
                 np.tile(right, (len(devs), 1)).reshape(len(devs), len(right))]
            )
            result = _batch.evaluate(mechanism, B, C)
        if result is not None:
            win, pay = result
            cols = slice(len(left), len(left) + L)
            util = v * win[:, cols].any(axis=1) - pay[:, cols].sum(axis=1)
        else:
            util = np.array([
                _utility(mechanism, C, values, [(x,) for x in left] + [d] + [(x,) for x in right], agent)
                for d in devs
            ])
        gains = util - truthful
        top = gains.max()
        if top > best_gain + 1e-12:
            cands = [devs[j] for j in np.flatnonzero(gains >= top - 1e-12)]
            best_gain, best_dev = float(top), min(cands)
    return best_gain, best_dev


def _search_chunk(args):
    mech_key, C, grid, items, max_ids, specials, include_zero = args
    mechanism = MechanismId(mech_key) if isinstance(mech_key, str) else mech_key
    examined = 0
    c1 = cost_of(C, 1)
    for values, agent in items:
        opts = _deviation_options(values[agent], grid, c1, specials, include_zero)
        devs = _deviation_lists(opts, max_ids)
        gain, dev = _search_profile(mechanism, C, values, agent, devs)
        examined += len(devs)
        if gain > VERDICT_TAU:
            return examined, (values, agent, dev)
    return examined, None


def _deviation_check(mechanism, C, grid, profiles, max_ids, specials, include_zero, kind):
    start = time.perf_counter()
    if profiles is None:
        # anonymity: the deviator is agent 0, opponents form a sorted multiset
        chunks = []
        for n in range(1, grid.max_agents + 1):
            for v in grid.values():
                items = [((v,) + opp, 0) for opp in combinations_with_replacement(grid.values(), n - 1)]
                chunks.append(items)
    else:
        chunks = [[(tuple(map(float, p)), a)] for p in profiles for a in range(len(p))]

    key = _mechanism_key(mechanism)
    payload = key if key is not None else mechanism
    jobs = [(payload, C, grid, items, max_ids, specials, include_zero) for items in chunks]
    workers = worker_count()
    examined, found = 0, None
    if workers > 1 and key is not None and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_search_chunk, jobs))
        for ex, hit in results:
            examined += ex
            if hit is not None and found is None:
                found = hit
    else:
        for job in jobs:
            ex, hit = _search_chunk(job)
            examined += ex
            if hit is not None:
                found = hit
                break

    report = CheckReport("pass", None, examined)
    if found is not None:
        values, agent, dev = found
        reports = [[x] for x in values]
        reports[agent] = list(dev)
        witness = {
            "kind": kind,
            "valuations": list(values),
            "agent": agent,
            "reports": reports,
        }
        truthful = _utility(mechanism, C, values, _truthful_profile(values), agent)
        deviating = _utility(mechanism, C, values, reports, agent)
        witness["utilities"] = {"truthful": truthful, "deviation": deviating}
        witness["gain"] = deviating - truthful
        if not witness["gain"] > VERDICT_TAU:
            raise AssertionError("batch and scalar evaluation disagree on witness")
        report = CheckReport("violated", witness, examined)
    report.elapsed = time.perf_counter() - start
    return report


def check_truthful(mechanism, C: CostFunction, grid: Grid, profiles=None) -> CheckReport:
    """Single-identity misreports on the grid (plus zero) against truthful opponents."""
    return _deviation_check(mechanism, C, grid, profiles, 1, False, True, "truthful")


def check_sybil_proof(mechanism, C: CostFunction, grid: Grid, profiles=None) -> CheckReport:
    """Multi-identity deviations (1..``grid.max_sybils`` bids) against truthful
    opponents.  Bids range over the grid plus ``v, v/2, v/3, f(1), f(1)+step``."""
    return _deviation_check(mechanism, C, grid, profiles, grid.max_sybils, True, False, "sybil")


# ---------------------------------------------------------------- thresholds


def threshold_payment(
    mechanism, C: CostFunction, i: int, b_minus_i: Sequence[float], tol: float = 1e-9,
    scan: int = 128,
) -> float:
    """Infimum bid at which identity ``i`` wins, others fixed at ``b_minus_i``.

    Scans ``[0, B_hi]`` for a non-monotone win region first, then bisects.
    Returns ``math.inf`` if ``i`` never wins up to ``B_hi``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    run = as_mechanism(mechanism)
    others = [float(b) for b in b_minus_i]
    n = len(others) + 1

    def wins(t):
        bids = others[:i] + [t] + others[i:]
        return i in run(bids, C).winners

    hi = max(others, default=0.0) + cost_of(C, n) + 1.0
    grid = np.linspace(0.0, hi, scan + 1)
    flags = [wins(float(t)) for t in grid]
    if not flags[-1]:
        if any(flags):
            j = flags.index(True)
            raise MonotonicityError(float(grid[j]), float(grid[-1]))
        return math.inf
    first = flags.index(True)
    if not all(flags[first:]):
        j = flags.index(False, first)
        raise MonotonicityError(float(grid[first]), float(grid[j]))
    if first == 0:
        return 0.0
    lo, hi = float(grid[first - 1]), float(grid[first])
    for _ in range(60):
        if hi - lo <= tol / 2:
            break
        mid = 0.5 * (lo + hi)
        if wins(mid):
            hi = mid
        else:
            lo = mid
    return hi


def check_threshold_payments(
    mechanism, C: CostFunction, samples: int = 200, max_agents: int = 4, seed: int = 0,
    max_value: float = 1.5, tol: float = 1e-6,
) -> CheckReport:
    """Every winner's charged payment equals its threshold bid."""
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    run = as_mechanism(mechanism)
    examined = 0
    for _ in range(samples):
        n = int(rng.integers(1, max_agents + 1))
        bids = [float(x) for x in rng.uniform(0, max_value, n)]
        out = run(bids, C)
        for i in sorted(out.winners):
            examined += 1
            others = bids[:i] + bids[i + 1 :]
            try:
                t = threshold_payment(mechanism, C, i, others, tol=tol / 100)
            except MonotonicityError as err:
                return CheckReport("violated", {
                    "kind": "monotonicity", "bids": bids, "identity": i,
                    "winning_bid": err.winning_bid, "losing_bid": err.losing_bid,
                }, examined, time.perf_counter() - start)
            if not abs(t - out.payments[i]) <= tol:
                return CheckReport("violated", {
                    "kind": "threshold", "bids": bids, "identity": i,
                    "payment": out.payments[i], "threshold": t,
                }, examined, time.perf_counter() - start)
    return CheckReport("pass", None, examined, time.perf_counter() - start)


# ---------------------------------------------------------------- other axioms


def check_strong_monotonic(
    mechanism, C: CostFunction, samples: int, grid: Grid, seed: int = 0, check_payments=None
) -> CheckReport:
    """Random grid pairs ``b <= b'``: winners may only grow; with
    ``check_payments`` (default: Shapley only) per-winner payments may not rise."""
    start = time.perf_counter()
    if check_payments is None:
        check_payments = _mechanism_key(mechanism) == MechanismId.SHAPLEY.value
    rng = np.random.default_rng(seed)
    run = as_mechanism(mechanism)
    vals = np.array(grid.values(include_zero=True))
    for _ in range(samples):
        n = int(rng.integers(1, grid.max_agents + 1))
        b = rng.choice(vals, n)
        b2 = b + rng.choice(vals, n) * rng.integers(0, 2, n)
        b, b2 = [float(x) for x in b], [float(x) for x in b2]
        low, high = run(b, C), run(b2, C)
        bad = None
        if not low.winners <= high.winners:
            bad = "winner set shrank"
        elif check_payments and any(high.payments[i] > low.payments[i] + TAU for i in low.winners):
            bad = "payment increased"
        if bad:
            return CheckReport("violated", {
                "kind": "strong-monotonicity", "reason": bad, "bids": b, "raised_bids": b2,
                "winners": sorted(low.winners), "raised_winners": sorted(high.winners),
                "payments": list(low.payments), "raised_payments": list(high.payments),
            }, samples, time.perf_counter() - start)
    return CheckReport("pass", None, samples, time.perf_counter() - start)


BUDGET_CLASSES = ("deficit", "no-deficit", "budget-balanced")


@dataclass
class BudgetReport:
    worst: str
    counts: dict
    witness: dict | None
    cases_examined: int

    def to_dict(self) -> dict:
        return {
            "worst": self.worst, "counts": dict(self.counts),
            "witness": self.witness, "cases_examined": self.cases_examined,
        }


def classify_budget(payments: Sequence[float], cost: float) -> str:
    total = math.fsum(payments)
    if abs(total - cost) <= TAU:
        return "budget-balanced"
    if total >= cost - TAU:
        return "no-deficit"
    return "deficit"


def check_budget(mechanism, C: CostFunction, grid: Grid, profiles=None) -> BudgetReport:
    run = as_mechanism(mechanism)
    if profiles is None:
        vals = grid.values(include_zero=True)
        profiles = [
            p for n in range(1, grid.max_agents + 1)
            for p in combinations_with_replacement(vals, n)
        ]
    counts = dict.fromkeys(BUDGET_CLASSES, 0)
    worst, witness = "budget-balanced", None
    for bids in profiles:
        bids = list(bids)
        out = run(bids, C)
        cost = cost_of(C, len(out.winners))
        cls = classify_budget(out.payments, cost)
        counts[cls] += 1
        if witness is None or BUDGET_CLASSES.index(cls) < BUDGET_CLASSES.index(worst):
            worst = cls
            witness = {"bids": bids, "payments": list(out.payments), "cost": cost}
    return BudgetReport(worst, counts, witness, len(profiles))


def _identity_triples(bids, out):
    return sorted((b, i in out.winners, round(out.payments[i], 9)) for i, b in enumerate(bids))


def check_anonymity_consistency(
    mechanism, C: CostFunction, samples: int, seed: int = 0, max_agents: int = 5,
    max_value: float = 1.5, max_padding: int = 3,
) -> CheckReport:
    """Random profiles: permuting bids permutes the outcome; appending zero
    bids leaves the original identities' outcome unchanged."""
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    run = as_mechanism(mechanism)
    for s in range(samples):
        n = int(rng.integers(1, max_agents + 1))
        raw = rng.uniform(0, max_value, n)
        if s % 3 == 0:
            raw = np.round(raw * 4) / 4  # force ties
        bids = [float(x) for x in raw]
        out = run(bids, C)
        perm = [int(j) for j in rng.permutation(n)]
        pb = [bids[j] for j in perm]
        pout = run(pb, C)
        exact = all(
            (j in out.winners) == (k in pout.winners)
            and abs(out.payments[j] - pout.payments[k]) <= TAU
            for k, j in enumerate(perm)
        )
        if not exact and _identity_triples(bids, out) != _identity_triples(pb, pout):
            return CheckReport("violated", {
                "kind": "anonymity", "bids": bids, "permutation": perm,
                "winners": sorted(out.winners), "permuted_winners": sorted(pout.winners),
            }, s + 1, time.perf_counter() - start)
        pad = bids + [0.0] * int(rng.integers(1, max_padding + 1))
        padded = run(pad, C)
        same = all(
            (i in out.winners) == (i in padded.winners)
            and abs(out.payments[i] - padded.payments[i]) <= TAU
            for i in range(n)
        )
        if not same:
            return CheckReport("violated", {
                "kind": "consistency", "bids": bids, "padded_bids": pad,
                "winners": sorted(out.winners), "padded_winners": sorted(padded.winners),
            }, s + 1, time.perf_counter() - start)
    return CheckReport("pass", None, samples, time.perf_counter() - start)


def check_separable(mechanism, C: CostFunction, grid: Grid) -> CheckReport:
    """Payments depend only on the winner set (proxy for group strategy-proofness)."""
    start = time.perf_counter()
    run = as_mechanism(mechanism)
    vals = grid.values(include_zero=True)
    examined = 0
    for n in range(1, grid.max_agents + 1):
        seen = {}
        for bids in product(vals, repeat=n):
            examined += 1
            out = run(list(bids), C)
            key = out.winners
            pays = tuple(round(p, 9) for p in out.payments)
            if key in seen and seen[key][1] != pays:
                return CheckReport("violated", {
                    "kind": "separability", "winners": sorted(key),
                    "bids": list(seen[key][0]), "payments": list(seen[key][1]),
                    "other_bids": list(bids), "other_payments": list(pays),
                }, examined, time.perf_counter() - start)
            seen.setdefault(key, (bids, pays))
    report = CheckReport("pass", None, examined, time.perf_counter() - start)
    report.notes.append("separability checked as a proxy for group strategy-proofness")
    return report
