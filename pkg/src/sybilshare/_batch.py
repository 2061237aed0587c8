"""Row-wise numpy versions of the catalog mechanisms.

Each function takes a ``(N, m)`` bid matrix and returns ``(win, pay)`` arrays
of the same shape.  They mirror the scalar implementations in
:mod:`sybilshare.mechanisms` (same sorting, tie and slack rules) and are
cross-checked against them in the test suite.
"""
from __future__ import annotations

import numpy as np

from .core import TAU, CostFunction, cost_of
from .mechanisms import MechanismId, harmonic


def _sort_desc(B):
    order = np.argsort(-B, axis=1, kind="stable")
    return order, np.take_along_axis(B, order, axis=1)


def _unsort(order, sorted_vals):
    out = np.empty_like(sorted_vals)
    np.put_along_axis(out, order, sorted_vals, axis=1)
    return out


def _largest_true(mask):
    """1-based index of the last True per row, 0 if none."""
    m = mask.shape[1]
    any_true = mask.any(axis=1)
    last = m - np.argmax(mask[:, ::-1], axis=1)
    return np.where(any_true, last, 0)


def _top_k_mask(k, m):
    return np.arange(m)[None, :] < k[:, None]


def shapley(B, C: CostFunction):
    N, m = B.shape
    order, S = _sort_desc(B)
    shares = np.array([cost_of(C, j) / j for j in range(1, m + 1)]) if m else np.zeros(0)
    k = _largest_true(S >= shares[None, :] - TAU)
    top = _top_k_mask(k, m)
    share = np.concatenate([[0.0], shares])[k]
    pay_sorted = np.where(top, share[:, None], 0.0)
    return _unsort(order, top), _unsort(order, pay_sorted)


def optimal_sybil_proof(B, c: float):
    N, m = B.shape
    order, S = _sort_desc(B)
    k = (S >= c / 2 - TAU).sum(axis=1)
    lone = (k == 1) & (S[:, 0] >= c - TAU) if m else np.zeros(N, bool)
    top = _top_k_mask(np.where(k >= 2, k, np.where(lone, 1, 0)), m)
    price = np.where(k >= 2, c / 2, c)
    pay_sorted = np.where(top, price[:, None], 0.0)
    return _unsort(order, top), _unsort(order, pay_sorted)


def vcg(B, c: float):
    total = B.sum(axis=1)
    funded = total - c > TAU
    win = np.repeat(funded[:, None], B.shape[1], axis=1)
    pay = np.maximum(0.0, c - (total[:, None] - B))
    return win, np.where(win, pay, 0.0)


def _best_prefix(S, H):
    """Largest maximising k and its value for prefix sums minus ``H[k]``."""
    N, m = S.shape
    values = np.concatenate([np.zeros((N, 1)), np.cumsum(S, axis=1) - H[None, 1 : m + 1]], axis=1)
    best = values.max(axis=1)
    k = _largest_true(values >= best[:, None] - TAU) - 1
    return k, values[np.arange(N), k]


def potential(B):
    N, m = B.shape
    H = np.array([harmonic(j) for j in range(m + 1)])
    order, S = _sort_desc(B)
    k, _ = _best_prefix(S, H)
    top = _top_k_mask(k, m)
    served_sum = np.where(top, S, 0.0).sum(axis=1)
    pay_sorted = np.zeros_like(S)
    for r in range(m):
        rows = k > r
        if not rows.any():
            continue
        # others' bids with identity at sorted position r zeroed out, still sorted
        rest = np.concatenate([np.delete(S[rows], r, axis=1), np.zeros((rows.sum(), 1))], axis=1)
        _, without = _best_prefix(rest, H)
        with_i = served_sum[rows] - S[rows, r] - H[k[rows]]
        pay_sorted[rows, r] = np.maximum(0.0, without - with_i)
    return _unsort(order, top), _unsort(order, pay_sorted)


def evaluate(mechanism, B, C: CostFunction):
    """Dispatch on a mechanism id; returns ``None`` if no batch version exists."""
    try:
        mid = MechanismId.parse(mechanism)
    except (ValueError, TypeError):
        return None
    B = np.asarray(B, dtype=float)
    if mid is MechanismId.SHAPLEY:
        return shapley(B, C)
    if not C.is_constant:
        return None
    if mid is MechanismId.OPTIMAL_SYBIL_PROOF:
        return optimal_sybil_proof(B, C.c)
    if mid is MechanismId.VCG:
        return vcg(B, C.c)
    if mid is MechanismId.POTENTIAL:
        if abs(C.c - 1.0) > TAU:
            raise ValueError("the potential mechanism is defined for unit cost only")
        return potential(B)
    return None


def shapley_served_agents(first_bids, B, C: CostFunction):
    """Agent-level service under Shapley for batches of Sybil profiles.

    ``B`` holds all identity bids per row (zero padding allowed while
    ``f(m)/m > TAU``); ``first_bids`` is ``(N, n)`` with each agent's highest
    bid.  Equal bids never straddle the Shapley cut, so an agent is served iff
    its highest bid reaches the lowest served bid.
    """
    N, m = B.shape
    S = -np.sort(-B, axis=1)
    shares = np.array([cost_of(C, j) / j for j in range(1, m + 1)])
    k = _largest_true(S >= shares[None, :] - TAU)
    cutoff = np.where(k > 0, S[np.arange(N), np.maximum(k, 1) - 1], np.inf)
    return (first_bids >= cutoff[:, None]) & (k[:, None] > 0), k
