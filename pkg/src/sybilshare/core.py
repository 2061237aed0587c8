"""Shared domain types: cost functions, bid vectors and mechanism outcomes."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

TAU = 1e-9
DEFAULT_N_MAX = 64


class CostRangeError(ValueError):
    """Raised when a table-backed cost function is queried beyond ``n_max``."""


@dataclass(frozen=True)
class CostFunction:
    """Symmetric cost ``C(S) = f(|S|)``.

    ``kind`` is ``"constant"`` (``f(k) = c`` for ``k >= 1``) or ``"concave"``
    (``f`` given by ``table``, ``table[k] = f(k)``).  A concave table shorter
    than ``n_max + 1`` is continued past its end by repeating the final
    increment, which keeps a valid table monotone and concave.
    """

    kind: str
    c: float = 1.0
    table: tuple[float, ...] = ()
    n_max: int = DEFAULT_N_MAX

    def __post_init__(self):
        if self.kind not in ("constant", "concave"):
            raise ValueError(f"unknown cost kind {self.kind!r}")
        if self.kind == "concave":
            if len(self.table) == 0:
                raise ValueError("concave cost needs a non-empty table")
            object.__setattr__(self, "table", tuple(float(x) for x in self.table))
            object.__setattr__(self, "n_max", max(self.n_max, len(self.table) - 1))

    @classmethod
    def constant(cls, c: float = 1.0) -> "CostFunction":
        return cls("constant", c=float(c))

    @classmethod
    def concave(cls, table: Iterable[float], n_max: int = DEFAULT_N_MAX) -> "CostFunction":
        return cls("concave", table=tuple(table), n_max=n_max)

    @property
    def is_constant(self) -> bool:
        return self.kind == "constant"

    def __call__(self, k: int) -> float:
        return cost_of(self, k)

    def to_dict(self) -> dict:
        if self.is_constant:
            return {"kind": "constant", "c": self.c}
        return {"kind": "concave", "f": list(self.table)}

    @classmethod
    def from_dict(cls, data: dict) -> "CostFunction":
        kind = data.get("kind")
        if kind == "constant":
            return cls.constant(float(data.get("c", 1.0)))
        if kind == "concave":
            if "f" not in data:
                raise ValueError("concave cost spec needs an 'f' table")
            return cls.concave(data["f"], n_max=int(data.get("n_max", DEFAULT_N_MAX)))
        raise ValueError(f"unknown cost kind {kind!r}")


def cost_of(C: CostFunction, k: int) -> float:
    """Cost of serving ``k`` identities."""
    if k < 0:
        raise ValueError("cardinality must be non-negative")
    if k == 0:
        return 0.0
    if C.is_constant:
        return C.c
    if k > C.n_max:
        raise CostRangeError(f"k={k} exceeds n_max={C.n_max} of the cost table")
    table = C.table
    last = len(table) - 1
    if k <= last:
        return table[k]
    step = table[last] - table[last - 1] if last >= 1 else 0.0
    return table[last] + (k - last) * step


def average_cost(C: CostFunction, k: int) -> float:
    """Per-identity share ``f(k)/k``; zero for ``k = 0``."""
    return cost_of(C, k) / k if k else 0.0


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    problems: tuple[str, ...] = ()


def validate_cost_function(C: CostFunction) -> ValidationReport:
    problems = []
    if C.is_constant:
        if not (math.isfinite(C.c) and C.c > 0):
            problems.append(f"constant cost must be positive and finite, got {C.c}")
        return ValidationReport(not problems, tuple(problems))

    f = C.table
    if any(not math.isfinite(x) or x < 0 for x in f):
        problems.append("table entries must be finite and non-negative")
    if abs(f[0]) > TAU:
        problems.append(f"f(0) must be 0, got {f[0]}")
    inc = [f[k + 1] - f[k] for k in range(len(f) - 1)]
    for k, d in enumerate(inc):
        if d < -TAU:
            problems.append(f"monotonicity: f({k + 1}) < f({k})")
    for k in range(1, len(inc)):
        if inc[k] > inc[k - 1] + TAU:
            problems.append(
                f"concavity: increment {inc[k]:g} at k={k + 1} exceeds previous {inc[k - 1]:g}"
            )
    return ValidationReport(not problems, tuple(problems))


def check_bids(bids: Sequence[float]) -> tuple[float, ...]:
    out = tuple(float(b) for b in bids)
    for b in out:
        if not math.isfinite(b) or b < 0:
            raise ValueError(f"bids must be finite and non-negative, got {b}")
    return out


@dataclass(frozen=True)
class Outcome:
    """Identity-level allocation and payments."""

    winners: frozenset
    payments: tuple[float, ...]

    @property
    def n(self) -> int:
        return len(self.payments)

    def served(self, i: int) -> bool:
        return i in self.winners

    def total_payment(self) -> float:
        return math.fsum(self.payments)

    def check(self, bids: Sequence[float], tol: float = TAU) -> None:
        """Assert no positive transfers and individual rationality."""
        if len(bids) != len(self.payments):
            raise AssertionError("payments and bids differ in length")
        for i, (b, p) in enumerate(zip(bids, self.payments)):
            if p < -tol:
                raise AssertionError(f"NPT violated at identity {i}: payment {p}")
            if i in self.winners:
                if p > b + tol:
                    raise AssertionError(f"IR violated at identity {i}: pays {p} > bid {b}")
            elif abs(p) > tol:
                raise AssertionError(f"loser {i} charged {p}")


def empty_outcome(n: int) -> Outcome:
    return Outcome(frozenset(), (0.0,) * n)


def descending_order(bids: Sequence[float]) -> list[int]:
    """Identity indices by descending bid; ties keep original index order."""
    return sorted(range(len(bids)), key=lambda i: -bids[i])


def infimum_winning_bid(
    wins: Callable[[float], bool], lo: float, hi: float, tol: float = 1e-12, iters: int = 60
) -> float:
    """Bisect for the smallest bid in ``(lo, hi]`` at which ``wins`` holds.

    ``wins(hi)`` must be true.  Returns the smallest winning bid found, which
    is within ``tol`` (or 60 halvings) of the infimum when the win region is
    an upper interval.
    """
    if wins(lo):
        return lo
    for _ in range(iters):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if wins(mid):
            hi = mid
        else:
            lo = mid
    return hi


Mechanism = Callable[[Sequence[float], CostFunction], Outcome]


@dataclass(frozen=True)
class ValuationProfile:
    values: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "values", check_bids(self.values))

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]


def format_money(x: float) -> str:
    """Shortest round-trip text for ``x`` after rounding to 12 significant digits."""
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    return repr(float(f"{float(x):.12g}"))
