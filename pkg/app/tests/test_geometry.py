from fractions import Fraction
from pathlib import Path

import pytest

import numpy as np

from app.box import correlator_vector, make_box, random_box, reference_box
from app.geometry import (
    HPolytope,
    UnboundedPolytope,
    box_correlator_map,
    build_box_polytope,
    build_q_delta,
    build_q_lifted,
    check_bounded,
    dump_polytope,
    enumerate_vertices,
    find_preimage,
    lp_feasible,
    polytope_feasible,
    verify_characterization,
)
from app.geometry.polytope import BOX_LABELS, box_bounds
from app.strength import family_witness

SAMPLES = Path(__file__).resolve().parents[1] / 'data' / 'samples'


def test_q_delta_layout():
    poly = build_q_delta(2, 2)
    assert poly.dim == 6
    assert poly.summed_count == 4
    assert len(poly.inequalities) == 4 + 12
    assert poly.labels == ('x_a1', 'y_a1', 'x_b0', 'y_b0', 'x_b1', 'y_b1')
    assert build_q_delta(3, 1).summed_count == 16
    assert build_q_delta(2, 1, relaxed=True).dim == 8
    with pytest.raises(ValueError):
        build_q_delta(2, 2.5)


def test_dump_matches_committed_sample():
    expected = (SAMPLES / 'q_delta_m2_delta2.txt').read_text(encoding='utf-8')
    assert dump_polytope(build_q_delta(2, 2)) == expected


def test_membership_of_family_witness_and_reference_box():
    poly = build_q_delta(2, Fraction(1))
    witness = family_witness(1.0, 0.25)
    assert poly.contains([Fraction(v).limit_denominator(1000) for v in witness.as_array()])
    values = correlator_vector(reference_box(2.0, 0.5)).as_array()
    assert build_q_delta(2, 2).contains(list(values), tol=1e-12)
    outside = [0.5, -0.5, 0.9, 0.5, 1.0, 0.5]
    assert not build_q_delta(2, 2).contains(outside, tol=1e-12)
    assert build_q_delta(2, 2).violations(outside).max() > 0


def test_vertices_of_maximal_violation_slice():
    vertices = enumerate_vertices(build_q_delta(2, 2))
    assert len(vertices) == 4
    for x_a1, y_a1, x_b0, y_b0, x_b1, y_b1 in vertices:
        assert x_b0 == 1 and x_b1 == 1
        assert y_b1 == x_a1 and y_b0 == -y_a1
        assert abs(x_a1) == 1 and abs(y_a1) == 1


def test_exact_lp_feasibility():
    assert not lp_feasible([], [((1,), 1), ((-1,), -2)]).feasible
    result = lp_feasible([((1, 1), 1)], [((-1, 0), 0), ((0, -1), 0)])
    assert result.feasible
    x, y = result.point
    assert x + y == 1 and x >= 0 and y >= 0
    poly = build_q_delta(2, 2)
    found = polytope_feasible(poly)
    assert found.feasible and poly.contains(found.point)


def test_restrict_detects_empty_slices():
    poly = build_q_delta(2, 2)
    reduced = poly.restrict({2: 1, 4: 1})
    assert reduced.dim == 4
    assert polytope_feasible(reduced).feasible
    assert not polytope_feasible(poly.restrict({2: 0})).feasible


def test_check_bounded_flags_half_lines():
    ray = HPolytope(dim=1, inequalities=(((Fraction(-1),), Fraction(0)),))
    with pytest.raises(UnboundedPolytope):
        check_bounded(ray)
    check_bounded(build_q_delta(2, 1))


def test_reference_correlators_have_a_box_preimage():
    x = Fraction(1, 2)
    correlators = [x, -x, Fraction(1), x, Fraction(1), x]
    assert find_preimage(correlators, Fraction(2)).feasible
    box_poly = build_box_polytope()
    box = reference_box(2.0, 0.5)
    tb = box.two_body()
    arrays = {'ab': tb.ab, 'ae': tb.ae, 'be': tb.be}
    point = [arrays[label[:2]][int(label[2]), int(label[3])] for label in BOX_LABELS]
    assert box_poly.contains(point, tol=1e-12)
    assert set(box_correlator_map()) == {'x_a1', 'y_a1', 'x_b0', 'y_b0', 'x_b1', 'y_b1'}


def test_unreachable_correlators_have_no_preimage():
    correlators = [Fraction(0)] * 6
    assert not find_preimage(correlators, Fraction(2)).feasible


def test_lifted_polytope_vertices_sit_in_the_extreme_slices():
    lifted = build_q_lifted()
    assert lifted.dim == 7 and lifted.summed_count == 4
    assert build_q_lifted(drop_constraint=0).summed_count == 3
    report = verify_characterization()
    assert report.q_vertices_in_slices
    assert report.all_preimages_found
    counts = report.vertex_counts
    assert counts['q_v'] == counts['delta_0'] + counts['delta_2']
    assert counts['delta_2'] == 4


def test_dropping_a_summed_constraint_loses_preimages():
    report = verify_characterization(drop_constraint=0)
    assert report.dropped_constraint == 0
    assert not report.all_preimages_found
    assert report.failures


def test_q_delta_slices_are_nested():
    outer = build_q_delta(2, 1)
    middle = build_q_delta(2, Fraction(1, 2))
    for vertex in enumerate_vertices(build_q_delta(2, 2)):
        assert outer.contains(vertex)
        assert middle.contains(vertex)


def test_correlator_vector_is_linear_in_the_table():
    first, second = random_box(2, seed=3), random_box(2, seed=4)
    weight = 0.3
    mixed = make_box(first.scenario, weight * first.table + (1 - weight) * second.table)
    expected = weight * correlator_vector(first).as_array() + (
        1 - weight
    ) * correlator_vector(second).as_array()
    assert np.allclose(correlator_vector(mixed).as_array(), expected)


def test_square_has_four_vertices():
    square = HPolytope(dim=2, inequalities=tuple(box_bounds(2)))
    vertices = enumerate_vertices(square)
    assert len(vertices) == 4
    assert {tuple(v) for v in vertices} == {(-1, -1), (-1, 1), (1, -1), (1, 1)}


def test_inconsistent_equalities_yield_no_vertices():
    one = Fraction(1)
    poly = HPolytope(
        dim=1,
        inequalities=tuple(box_bounds(1)),
        equalities=(((one,), Fraction(0)), ((Fraction(2),), Fraction(2))),
    )
    assert len(enumerate_vertices(poly)) == 0
    consistent = HPolytope(
        dim=1,
        inequalities=tuple(box_bounds(1)),
        equalities=(((one,), Fraction(1, 2)), ((Fraction(2),), one)),
    )
    assert list(enumerate_vertices(consistent)) == [(Fraction(1, 2),)]
