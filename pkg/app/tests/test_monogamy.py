from itertools import product

import numpy as np
import pytest

from app.box import (
    correlator_vector,
    from_correlators,
    monogamy_functional,
    pr_times_coin,
    random_box,
    random_nonsignaling,
    reference_box,
)
from app.monogamy import (
    SIGN_PATTERNS,
    StrictModeInapplicable,
    SwapChoice,
    TripleInequality,
    bell_value,
    find_minimal_sets,
    generate_inequality_set,
    monogamy_lhs,
    summed_constraints,
    triple_inequality_holds,
    verify_minimal_set,
)
from app.schemas.core import BellScenario

# summed constraints of the two-setting family, keyed by coordinate label
SUMMED_M2 = [
    {'x_a1': 1, 'y_a1': -1, 'x_b0': 1, 'y_b0': -1, 'x_b1': 1, 'y_b1': -1},
    {'x_a1': 1, 'y_a1': 1, 'x_b0': 1, 'y_b0': 1, 'x_b1': 1, 'y_b1': -1},
    {'x_a1': -1, 'y_a1': -1, 'x_b0': 1, 'y_b0': -1, 'x_b1': 1, 'y_b1': 1},
    {'x_a1': -1, 'y_a1': 1, 'x_b0': 1, 'y_b0': 1, 'x_b1': 1, 'y_b1': 1},
]


def test_bell_value_of_pr_box_and_monogamy_at_the_bound():
    assert bell_value(pr_times_coin(2)) == pytest.approx(4.0)
    assert bell_value(pr_times_coin(3)) == pytest.approx(6.0)
    report = monogamy_lhs(pr_times_coin(2))
    assert report.lhs == pytest.approx(4.0)
    assert report.bound == 4.0
    assert not report.violated


def test_reference_box_violates_monogamy_by_delta():
    report = monogamy_lhs(reference_box(2.0, 0.46))
    assert report.lhs == pytest.approx(6.0)
    assert report.delta == pytest.approx(2.0)
    assert report.violated and report.violation == pytest.approx(2.0)
    assert monogamy_lhs(reference_box(0.8, 0.1)).delta == pytest.approx(0.8)


def test_random_nonsignaling_boxes_respect_monogamy():
    for seed in range(50):
        assert monogamy_lhs(random_nonsignaling(2, seed=seed)).lhs <= 4.0 + 1e-9


def test_strict_mode_needs_consistent_b0e_and_relaxed_mode_does_not():
    zeros = np.zeros((2, 2))
    be = np.array([[0.5, 0.0], [-0.5, 0.0]])
    box = from_correlators(BellScenario(m=2), zeros, zeros, be)
    with pytest.raises(StrictModeInapplicable) as excinfo:
        monogamy_lhs(box)
    assert excinfo.value.discrepancy == pytest.approx(1.0)
    relaxed = monogamy_lhs(box, relaxed=True)
    assert relaxed.lhs == pytest.approx(0.0)
    assert relaxed.relaxed


@pytest.mark.parametrize('signs', SIGN_PATTERNS)
def test_triple_inequality_holds_on_every_deterministic_outcome(signs):
    for a, b, e in product(range(2), repeat=3):
        dist = np.zeros((2, 2, 2))
        dist[a, b, e] = 1.0
        assert triple_inequality_holds(dist, signs)


def test_triple_inequality_rejects_positive_sign_product():
    with pytest.raises(ValueError):
        TripleInequality((0, 0), (1, 1, 1))
    member = TripleInequality((1, 0), (1, 1, -1))
    assert member.swapped().signs == (1, -1, 1)


def test_two_setting_summed_constraints():
    sets = summed_constraints(2)
    assert [s.summed for s in sets] == SUMMED_M2
    assert generate_inequality_set(2).summed == SUMMED_M2[0]
    assert len(summed_constraints(2, relaxed=True)) == 16
    assert len(summed_constraints(3)) == 16


def test_head_swaps_need_relaxed_family():
    with pytest.raises(ValueError):
        generate_inequality_set(2, SwapChoice(a=(0,), b=(), c=0, heads=(1, 0)))
    relaxed = generate_inequality_set(
        2, SwapChoice(a=(0,), b=(), c=0, heads=(1, 0)), relaxed=True
    )
    assert relaxed.summed['x_a0'] == 2


@pytest.mark.parametrize('m', [2, 3])
def test_summed_constraints_bound_the_violation_for_any_box(m):
    for seed in range(20):
        box = random_box(m, seed=seed)
        excess = monogamy_functional(box) - 2 * m
        values = correlator_vector(box).as_array()
        for ineq_set in summed_constraints(m):
            assert ineq_set.coefficients() @ values >= excess - 1e-9


def test_reference_box_makes_every_summed_constraint_tight():
    values = correlator_vector(reference_box(2.0, 0.46)).as_array()
    for ineq_set in summed_constraints(2):
        assert ineq_set.coefficients() @ values == pytest.approx(2.0)


def test_members_sum_to_chained_value_plus_b0e_terms():
    box = random_box(2, seed=4)
    ineq_set = generate_inequality_set(2)
    be = box.two_body().be
    summed = float(ineq_set.coefficients() @ correlator_vector(box).as_array())
    expected = bell_value(box) + be[0, 0] + be[1, 0] - summed
    assert ineq_set.members_value(box) == pytest.approx(expected)


@pytest.mark.parametrize('m', [2, 3])
def test_minimal_set_is_unique(m):
    assert verify_minimal_set(m) == 1
    assert verify_minimal_set(m, size=2 * m - 1) == 0
    (found,) = find_minimal_sets(m)
    assert len(found) == 2 * m


def test_minimal_set_search_is_limited_to_small_m():
    with pytest.raises(ValueError):
        verify_minimal_set(5)
