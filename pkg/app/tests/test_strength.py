import csv
from pathlib import Path

import numpy as np
import pytest

from app.channel import channel_layout, family_capacities
from app.geometry import build_q_delta
from app.strength import (
    c2_analytic,
    c_delta,
    chained_polytope_bound,
    curve,
    delta_grid,
    family_witness,
    grid_oracle,
    lattice_search,
    optimal_family,
    single_channel_bound,
    write_curve_csv,
)

SAMPLES = Path(__file__).resolve().parents[1] / 'data' / 'samples'


@pytest.mark.parametrize(
    'm, delta, expected',
    [(2, 0.0, 0.0), (2, 2.0, 0.081704), (3, 2.0, 0.029049)],
)
def test_single_channel_bound(m, delta, expected):
    assert single_channel_bound(m, delta) == pytest.approx(expected, abs=1e-6)


def test_single_channel_bound_validates_arguments():
    with pytest.raises(ValueError):
        single_channel_bound(1, 1.0)
    with pytest.raises(ValueError):
        single_channel_bound(2, 2.1)


def test_optimal_family_endpoints():
    assert optimal_family(0.0) == (0.0, 0.0)
    point = optimal_family(2.0)
    assert point.x_star == pytest.approx(0.459, abs=0.002)
    assert point.value == pytest.approx(0.158, abs=0.002)


def test_optimal_family_witness_stays_feasible():
    for delta in np.linspace(0.0, 2.0, 41):
        witness = family_witness(delta, optimal_family(delta).x_star)
        assert build_q_delta(2, float(delta)).contains(list(witness.as_array()), tol=1e-9)


def test_c2_analytic_report():
    report = c2_analytic()
    assert report.subregion_value == pytest.approx(0.321928, abs=1e-6)
    assert report.alpha_star == pytest.approx(0.459, abs=0.002)
    assert report.c2 == pytest.approx(0.158, abs=0.002)
    assert report.residual < 1e-9


def test_c_delta_endpoints():
    assert c_delta(0.0).value <= 1e-6
    result = c_delta(2.0)
    assert result.value == pytest.approx(0.158, abs=0.002)
    assert result.value == pytest.approx(c2_analytic().c2, abs=1e-4)
    assert result.method == 'minimax_solver'
    assert result.label == 'exact'


@pytest.mark.parametrize('delta', [0.5, 1.0, 1.5])
def test_c_delta_matches_family_and_sandwich(delta):
    result = c_delta(delta)
    assert result.value == pytest.approx(optimal_family(delta).value, abs=1e-3)
    assert single_channel_bound(2, delta) <= result.value + 1e-9
    poly = build_q_delta(2, delta)
    point = result.witness.as_array()
    assert poly.violations(point).max() <= 1e-9
    witness_max = family_capacities(point, channel_layout(2)).max()
    assert witness_max == pytest.approx(result.value, abs=1e-6)


@pytest.mark.parametrize('delta', [1.0, 2.0])
def test_relaxed_mode_keeps_value_and_equalizes_b0e(delta):
    strict = c_delta(delta)
    relaxed = c_delta(delta, relaxed=True)
    assert relaxed.value == pytest.approx(strict.value, abs=1e-3)
    assert relaxed.witness.relaxed
    assert relaxed.witness.x_a0 == pytest.approx(relaxed.witness.y_a0, abs=1e-9)


def test_chained_polytope_bound():
    assert chained_polytope_bound(2, 1.0).value == pytest.approx(c_delta(1.0).value, abs=1e-5)
    assert chained_polytope_bound(3, 0.0).value <= 1e-6
    bound = chained_polytope_bound(3, 2.0, tol=1e-4)
    assert bound.value >= single_channel_bound(3, 2.0) - 1e-4
    assert bound.conjectured and bound.label == 'conjectured lower bound'
    with pytest.raises(ValueError):
        chained_polytope_bound(5, 1.0)


def test_delta_grid():
    assert delta_grid(0.5) == [0.0, 0.5, 1.0, 1.5, 2.0]
    assert len(delta_grid(0.1)) == 21
    with pytest.raises(ValueError):
        delta_grid(0.3)


def test_curve_rows_are_monotone_and_ordered():
    serial = curve(2, [0.0, 1.0, 2.0])
    assert serial.monotone and not serial.failed_rows
    assert serial.rows[0].c_delta <= 1e-6
    assert serial.rows[-1].c_delta == pytest.approx(0.158, abs=0.002)
    assert serial.rows[-1].gava_m2 == pytest.approx(0.081704, abs=1e-6)
    assert all(row.family_value is not None for row in serial.rows)
    parallel = curve(2, [0.0, 1.0, 2.0], workers=3)
    assert [row.delta for row in parallel.rows] == [0.0, 1.0, 2.0]
    assert [row.c_delta for row in parallel.rows] == pytest.approx(
        [row.c_delta for row in serial.rows], abs=1e-12
    )
    with pytest.raises(ValueError):
        curve(2, [1.0, 0.5])


def test_curve_csv_layout(tmp_path):
    path = write_curve_csv(curve(2, [0.0, 2.0]), tmp_path / 'curve.csv')
    lines = path.read_text(encoding='utf-8').splitlines()
    header = lines[0].split(',')
    assert header[:5] == ['delta', 'c_delta', 'family_value', 'gava_m2', 'gava_m3']
    assert header[5:] == ['x_a1', 'y_a1', 'x_b0', 'y_b0', 'x_b1', 'y_b1']
    rows = list(csv.reader(lines[1:]))
    assert len(rows) == 2
    assert rows[0][0] == '0.000000' and rows[1][0] == '2.000000'
    assert rows[1][3] == '0.081704'


def test_curve_csv_marks_conjectured_and_failed_rows(tmp_path):
    conjectured = write_curve_csv(curve(3, [0.0]), tmp_path / 'm3.csv')
    lines = conjectured.read_text(encoding='utf-8').splitlines()
    assert 'x_a2' in lines[0].split(',')
    assert lines[1].split(',')[2] == ''
    assert lines[-1] == '# c_delta is a conjectured lower bound for m >= 3'

    failing = curve(2, [0.0, 1.0], max_iter=1)
    assert [row.delta for row in failing.failed_rows] == [1.0]
    assert failing.rows[1].c_delta is None
    path = write_curve_csv(failing, tmp_path / 'failed.csv')
    assert path.read_text(encoding='utf-8').splitlines()[-1] == (
        '# solver did not converge for delta=1'
    )


def test_grid_oracle_bounds_the_solver_from_above():
    assert grid_oracle(0.0) == 0.0
    solved = c_delta(2.0).value
    upper = grid_oracle(2.0, step=0.05)
    assert upper >= solved - 1e-6
    assert upper <= solved + 2e-3


def test_lattice_points_are_feasible():
    found = lattice_search(1.0, 0.05)
    assert build_q_delta(2, 1).contains(list(found.point), tol=1e-9)
    with pytest.raises(ValueError):
        lattice_search(1.0, 0.1)


def test_grid_oracle_bounds_the_solver_at_an_interior_delta():
    solved = c_delta(1.0).value
    upper = grid_oracle(1.0, step=0.05)
    assert upper >= solved - 1e-6
    assert upper <= solved + 2e-3


def test_relaxed_curve_carries_the_extra_pair(tmp_path):
    relaxed = curve(2, [2.0], relaxed=True)
    assert relaxed.relaxed
    assert relaxed.rows[0].c_delta == pytest.approx(0.158, abs=0.002)
    assert relaxed.rows[0].witness.relaxed
    path = write_curve_csv(relaxed, tmp_path / 'relaxed.csv')
    lines = path.read_text(encoding='utf-8').splitlines()
    assert lines[0].split(',')[-2:] == ['x_a0', 'y_a0']
    assert all(cell != '' for cell in lines[1].split(','))
    with pytest.raises(ValueError):
        curve(3, [0.0], relaxed=True)
    with pytest.raises(ValueError):
        chained_polytope_bound(3, 1.0, relaxed=True)


def test_committed_curve_example_is_consistent():
    with (SAMPLES / 'curve_example.csv').open(encoding='utf-8', newline='') as handle:
        rows = list(csv.DictReader(handle))
    assert [float(row['delta']) for row in rows] == delta_grid(0.5)
    values = [float(row['c_delta']) for row in rows]
    assert all(b >= a for a, b in zip(values, values[1:]))
    for row in rows:
        delta = float(row['delta'])
        assert float(row['gava_m2']) == pytest.approx(single_channel_bound(2, delta), abs=2e-6)
        assert float(row['gava_m3']) == pytest.approx(single_channel_bound(3, delta), abs=2e-6)
        family = optimal_family(delta).value
        assert float(row['family_value']) == pytest.approx(family, abs=2e-6)
        assert float(row['c_delta']) == pytest.approx(family, abs=1e-5)
        witness = [float(row[label]) for label in ('x_a1', 'y_a1', 'x_b0', 'y_b0', 'x_b1', 'y_b1')]
        assert build_q_delta(2, delta).contains(witness, tol=1e-5)
