"""Cost-sharing mechanisms for a public excludable good.

Every mechanism maps an identity-level bid vector to an :class:`Outcome`.
Sorting is by descending bid with ties kept in identity order, and all
threshold comparisons allow an absolute slack of ``TAU``.
"""
from __future__ import annotations

import math
from enum import Enum
from functools import lru_cache
from typing import Callable, Sequence

from .core import (
    TAU,
    CostFunction,
    Outcome,
    average_cost,
    check_bids,
    cost_of,
    descending_order,
    empty_outcome,
    infimum_winning_bid,
)


class MechanismId(str, Enum):
    VCG = "vcg"
    SHAPLEY = "shapley"
    POTENTIAL = "potential"
    OPTIMAL_SYBIL_PROOF = "osp"
    HYBRID = "hybrid"

    @classmethod
    def parse(cls, name: "str | MechanismId") -> "MechanismId":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("_", "-")
        aliases = {
            "optimal-sybil-proof": cls.OPTIMAL_SYBIL_PROOF,
            "optimalsybilproof": cls.OPTIMAL_SYBIL_PROOF,
            "shapley-value": cls.SHAPLEY,
        }
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise ValueError(
                f"unknown mechanism {name!r}; choose from {[m.value for m in cls]}"
            ) from None


@lru_cache(maxsize=None)
def harmonic(n: int) -> float:
    """``H_n = 1 + 1/2 + ... + 1/n`` with ``H_0 = 0``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return math.fsum(1.0 / i for i in range(1, n + 1))


def harmonic_table(n: int) -> tuple[float, ...]:
    return tuple(harmonic(k) for k in range(n + 1))


def _finish(bids, winners, payments) -> Outcome:
    out = Outcome(frozenset(winners), tuple(payments))
    out.check(bids)
    return out


def _largest_satisfying(sorted_bids, threshold: Callable[[int], float]) -> int:
    for k in range(len(sorted_bids), 0, -1):
        if sorted_bids[k - 1] >= threshold(k) - TAU:
            return k
    return 0


def run_vcg(bids: Sequence[float], c: float = 1.0) -> Outcome:
    """Serve everyone iff total bids strictly exceed ``c``; charge each
    identity the part of ``c`` the others do not cover."""
    if c <= 0:
        raise ValueError("cost must be positive")
    bids = check_bids(bids)
    n = len(bids)
    total = math.fsum(bids)
    if n == 0 or total - c <= TAU:
        return empty_outcome(n)
    payments = [max(0.0, c - (total - b)) for b in bids]
    return _finish(bids, range(n), payments)


def run_shapley(bids: Sequence[float], C: CostFunction) -> Outcome:
    """Serve the largest top-``k`` set whose members all bid at least
    ``f(k)/k``; each winner pays that share."""
    bids = check_bids(bids)
    n = len(bids)
    order = descending_order(bids)
    sorted_bids = [bids[i] for i in order]
    k = _largest_satisfying(sorted_bids, lambda j: average_cost(C, j))
    if k == 0:
        return empty_outcome(n)
    share = average_cost(C, k)
    payments = [0.0] * n
    for i in order[:k]:
        payments[i] = share
    return _finish(bids, order[:k], payments)


def _best_prefix(sorted_bids, penalty: Callable[[int], float]) -> tuple[int, float]:
    """Largest ``k`` maximising ``sum(sorted_bids[:k]) - penalty(k)``."""
    best_k, best = 0, 0.0
    acc = 0.0
    values = [0.0]
    for k, b in enumerate(sorted_bids, start=1):
        acc += b
        values.append(acc - penalty(k))
    best = max(values)
    for k in range(len(values) - 1, -1, -1):
        if values[k] >= best - TAU:
            best_k = k
            break
    return best_k, values[best_k]


def _potential_value(bids) -> float:
    _, value = _best_prefix(sorted(bids, reverse=True), harmonic)
    return value


def run_potential(bids: Sequence[float], c: float = 1.0) -> Outcome:
    """Maximise ``sum(b_S) - H_|S|`` and charge Clarke-style payments."""
    if abs(c - 1.0) > TAU:
        raise ValueError("the potential mechanism is defined for unit cost only")
    bids = check_bids(bids)
    n = len(bids)
    order = descending_order(bids)
    k, _ = _best_prefix([bids[i] for i in order], harmonic)
    if k == 0:
        return empty_outcome(n)
    winners = order[:k]
    served_sum = math.fsum(bids[i] for i in winners)
    payments = [0.0] * n
    for i in winners:
        others = list(bids)
        others[i] = 0.0
        without_i = _potential_value(others)
        with_i = served_sum - bids[i] - harmonic(k)
        payments[i] = max(0.0, without_i - with_i)
    return _finish(bids, winners, payments)


def run_optimal_sybil_proof(bids: Sequence[float], c: float = 1.0) -> Outcome:
    """Every bidder at or above ``c/2`` is served at price ``c/2``, except that
    a lone such bidder is served only when it covers ``c`` alone."""
    if c <= 0:
        raise ValueError("cost must be positive")
    bids = check_bids(bids)
    n = len(bids)
    order = descending_order(bids)
    k = sum(1 for b in bids if b >= c / 2 - TAU)
    if k >= 2:
        winners = order[:k]
        payments = [0.0] * n
        for i in winners:
            payments[i] = c / 2
        return _finish(bids, winners, payments)
    if k == 1 and bids[order[0]] >= c - TAU:
        payments = [0.0] * n
        payments[order[0]] = c
        return _finish(bids, [order[0]], payments)
    return empty_outcome(n)


def hybrid_winners(bids: Sequence[float], C: CostFunction, rule: str = "fixed") -> list[int]:
    """Allocation of the hybrid mechanism.

    ``rule="fixed"`` drops bidders below ``C(S*)/|S|`` with ``S*`` the surplus
    maximiser; ``rule="shrinking"`` uses the current ``C(S)/|S|`` instead.
    """
    order = descending_order(bids)
    k_star, _ = _best_prefix([bids[i] for i in order], lambda k: cost_of(C, k))
    S = list(order[:k_star])
    base = cost_of(C, k_star)
    while S:
        share = (base if rule == "fixed" else cost_of(C, len(S))) / len(S)
        if bids[S[-1]] >= share - TAU:
            break
        S.pop()
    return S


def run_hybrid(bids: Sequence[float], C: CostFunction, rule: str = "fixed") -> Outcome:
    """Surplus-maximising set pruned to bidders covering their share; winners
    pay their threshold bids."""
    if rule not in ("fixed", "shrinking"):
        raise ValueError("rule must be 'fixed' or 'shrinking'")
    bids = check_bids(bids)
    n = len(bids)
    winners = hybrid_winners(bids, C, rule)
    payments = [0.0] * n
    for i in winners:
        def wins(t, i=i):
            trial = list(bids)
            trial[i] = t
            return i in hybrid_winners(trial, C, rule)

        t = infimum_winning_bid(wins, 0.0, bids[i])
        # every comparison in the rule allows TAU of slack, so the bisected
        # boundary sits TAU below the exact threshold
        payments[i] = min(bids[i], t + TAU) if t > TAU else t
    return _finish(bids, winners, payments)


def _constant_c(C: CostFunction, name: str) -> float:
    if not C.is_constant:
        raise ValueError(f"{name} is defined for constant cost only")
    return C.c


def run_mechanism(mechanism, bids: Sequence[float], C: CostFunction) -> Outcome:
    return as_mechanism(mechanism)(bids, C)


def as_mechanism(mechanism) -> Callable[[Sequence[float], CostFunction], Outcome]:
    """Resolve a mechanism id (or pass through a callable ``(bids, C)``)."""
    if callable(mechanism) and not isinstance(mechanism, (str, MechanismId)):
        return mechanism
    return _DISPATCH[MechanismId.parse(mechanism)]


_DISPATCH = {
    MechanismId.VCG: lambda b, C: run_vcg(b, _constant_c(C, "VCG")),
    MechanismId.SHAPLEY: run_shapley,
    MechanismId.POTENTIAL: lambda b, C: run_potential(b, _constant_c(C, "potential")),
    MechanismId.OPTIMAL_SYBIL_PROOF: lambda b, C: run_optimal_sybil_proof(
        b, _constant_c(C, "optimal Sybil-proof")
    ),
    MechanismId.HYBRID: run_hybrid,
}

TRUTHFUL = (
    MechanismId.VCG,
    MechanismId.SHAPLEY,
    MechanismId.POTENTIAL,
    MechanismId.OPTIMAL_SYBIL_PROOF,
)
