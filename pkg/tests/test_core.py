import math

import pytest

from sybilshare.core import (
    CostFunction,
    CostRangeError,
    Outcome,
    cost_of,
    descending_order,
    format_money,
    infimum_winning_bid,
    validate_cost_function,
)


def test_constant_cost_values():
    C = CostFunction.constant(1)
    assert cost_of(C, 0) == 0
    assert cost_of(C, 7) == 1


def test_table_lookup_and_extension():
    C = CostFunction.concave([0, 1, 1.5, 1.8])
    assert cost_of(C, 2) == 1.5
    # continues with the last increment
    assert cost_of(C, 5) == pytest.approx(2.4)
    with pytest.raises(CostRangeError):
        cost_of(C, C.n_max + 1)


@pytest.mark.parametrize("table,ok", [
    ([0, 1, 2, 3], True),
    ([0, 1, 3], False),
    ([0.5, 1], False),
    ([0, 1, 0.5], False),
])
def test_validate_tables(table, ok):
    assert validate_cost_function(CostFunction.concave(table)).ok is ok


def test_validation_messages_name_the_problem():
    rep = validate_cost_function(CostFunction.concave([0, 1, 3]))
    assert any("concavity" in p for p in rep.problems)
    rep = validate_cost_function(CostFunction.concave([0.5, 1]))
    assert any("f(0)" in p for p in rep.problems)
    assert not validate_cost_function(CostFunction.constant(0)).ok


def test_average_cost_non_increasing_and_marginal_bound():
    C = CostFunction.concave([0, 1, 1.4, 1.7, 1.9, 2.05, 2.15])
    for k in range(1, 20):
        for m in range(k + 1, 21):
            assert cost_of(C, m) / m <= cost_of(C, k) / k + 1e-12
            assert (m - k) * cost_of(C, m) / m >= cost_of(C, m) - cost_of(C, k) - 1e-12


def test_dict_round_trip():
    for C in (CostFunction.constant(2.5), CostFunction.concave([0, 1, 1.5])):
        assert CostFunction.from_dict(C.to_dict()) == C
    with pytest.raises(ValueError):
        CostFunction.from_dict({"kind": "cubic"})


def test_outcome_check_rejects_ir_and_npt_breaches():
    Outcome(frozenset({0}), (0.5, 0.0)).check([0.6, 0.1])
    with pytest.raises(AssertionError):
        Outcome(frozenset({0}), (0.7, 0.0)).check([0.6, 0.1])
    with pytest.raises(AssertionError):
        Outcome(frozenset(), (0.0, -0.1)).check([0.6, 0.1])
    with pytest.raises(AssertionError):
        Outcome(frozenset({0}), (0.1, 0.1)).check([0.6, 0.1])


def test_descending_order_is_stable():
    assert descending_order([0.3, 0.9, 0.3, 0.9]) == [1, 3, 0, 2]


def test_infimum_winning_bid():
    t = infimum_winning_bid(lambda b: b >= 0.37, 0.0, 1.0)
    assert t == pytest.approx(0.37, abs=1e-11)
    assert infimum_winning_bid(lambda b: True, 0.0, 1.0) == 0.0


def test_format_money():
    assert format_money(1 / 3) == "0.333333333333"
    assert format_money(0.5) == "0.5"
    assert format_money(math.inf) == "inf"
    assert format_money(0.1 + 0.2) == "0.3"
