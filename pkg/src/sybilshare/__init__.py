"""Cost-sharing mechanisms for public excludable goods under Sybil strategies."""
from .core import (
    TAU,
    CostFunction,
    CostRangeError,
    Outcome,
    ValuationProfile,
    cost_of,
    validate_cost_function,
)
from .mechanisms import (
    MechanismId,
    harmonic,
    run_hybrid,
    run_mechanism,
    run_optimal_sybil_proof,
    run_potential,
    run_shapley,
    run_vcg,
)
from .sybil import SybilOutcome, agent_utility, flatten, run_sybil_extension
from .analysis import (
    CheckReport,
    Grid,
    MonotonicityError,
    check_anonymity_consistency,
    check_budget,
    check_separable,
    check_strong_monotonic,
    check_sybil_proof,
    check_threshold_payments,
    check_truthful,
    threshold_payment,
)
from .welfare import (
    WelfareScore,
    approx_ratio,
    best_response,
    canonical_z,
    check_swi_shapley,
    enumerate_B,
    optimal_allocation,
    social_cost,
    sybil_social_cost,
    worst_case_ratio,
)

__version__ = "0.1.0"
