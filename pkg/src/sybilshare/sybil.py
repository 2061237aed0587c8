"""Sybil extension: agents submit bid lists, one bid per identity."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .core import CostFunction, Outcome, check_bids
from .mechanisms import as_mechanism


def normalize_profile(profile: Sequence[Sequence[float]]) -> tuple[tuple[float, ...], ...]:
    """Validate a per-agent bid-list profile; an empty list becomes ``(0.0,)``."""
    return tuple(check_bids(bids) if len(bids) else (0.0,) for bids in profile)


@dataclass(frozen=True)
class SybilOutcome:
    served: tuple[bool, ...]
    payments: tuple[float, ...]
    outcome: Outcome
    owners: tuple[int, ...]

    @property
    def served_agents(self) -> frozenset:
        return frozenset(i for i, s in enumerate(self.served) if s)

    def identities_of(self, agent: int) -> list[int]:
        return [k for k, a in enumerate(self.owners) if a == agent]


def flatten(profile: Sequence[Sequence[float]]) -> tuple[tuple[float, ...], tuple[int, ...]]:
    """Concatenate per-agent bid lists; return identity bids and their owners."""
    bids, owners = [], []
    for agent, agent_bids in enumerate(normalize_profile(profile)):
        bids.extend(agent_bids)
        owners.extend([agent] * len(agent_bids))
    return tuple(bids), tuple(owners)


def aggregate(outcome: Outcome, owners: Sequence[int], n_agents: int) -> SybilOutcome:
    served = [False] * n_agents
    paid = [[] for _ in range(n_agents)]
    for k, agent in enumerate(owners):
        if k in outcome.winners:
            served[agent] = True
        paid[agent].append(outcome.payments[k])
    return SybilOutcome(
        tuple(served), tuple(math.fsum(p) for p in paid), outcome, tuple(owners)
    )


def run_sybil_extension(mechanism, C: CostFunction, profile) -> SybilOutcome:
    bids, owners = flatten(profile)
    outcome = as_mechanism(mechanism)(bids, C)
    return aggregate(outcome, owners, len(profile))


def agent_utility(v: float, out: SybilOutcome, agent: int) -> float:
    """Quasi-linear utility; extra served identities add nothing."""
    return v * out.served[agent] - out.payments[agent]


def utilities(values: Sequence[float], out: SybilOutcome) -> tuple[float, ...]:
    return tuple(agent_utility(v, out, i) for i, v in enumerate(values))
