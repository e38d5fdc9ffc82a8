from __future__ import annotations

import math
from fractions import Fraction
from itertools import product
from typing import List, NamedTuple, Optional

import numpy as np

from app.channel import channel_layout, correlator_capacity, family_capacities
from app.geometry import build_q_delta, rationalize
from app.strength.analytic import family_witness, optimal_family
from app.telemetry import timed

REFINE_RADIUS = 2
REFINE_MIN_STEP = 1e-7
FEASIBILITY_TOL = 1e-12


class GridPoint(NamedTuple):
    value: float
    point: np.ndarray


def _lattice_size(step: float) -> int:
    n = int(round(1.0 / step))
    if abs(n * step - 1.0) > 1e-9:
        raise ValueError(f'grid step must divide 1, got {step}')
    if n < 20:
        raise ValueError(f'grid step must be at most 0.05, got {step}')
    return n


def _suffix_min(table: np.ndarray) -> np.ndarray:
    """G[a, b] = min of table over a' >= a and b' >= b."""
    out = np.minimum.accumulate(table[::-1, :], axis=0)[::-1, :]
    return np.minimum.accumulate(out[:, ::-1], axis=1)[:, ::-1]


def lattice_search(delta: float, step: float) -> GridPoint:
    """Exhaustive minimum of the largest capacity over lattice points of the two-setting polytope.

    Coordinates are -1 + k/n. With M = u - v and N = u + v for each pair, the four summed
    constraints only couple the pairs through sums of M and N, so for fixed B_0 and A pairs the
    best B_1 pair is a lookup in a suffix-minimum table indexed by the required M and N.
    """
    n = _lattice_size(step)
    delta_units = math.ceil(rationalize(delta) * n)
    idx = np.arange(2 * n + 1)
    first, second = (a.ravel() for a in np.meshgrid(idx, idx, indexing='ij'))
    coords = -1.0 + idx / n
    caps = correlator_capacity(coords[first], coords[second])
    m_index = first - second
    n_index = first + second

    by_mn = np.full((4 * n + 2, 4 * n + 2), np.inf)
    by_mn[m_index + 2 * n, n_index] = caps
    best_pair1 = _suffix_min(by_mn)

    best = np.inf
    best_pair = (-1, -1)
    for a in np.argsort(caps, kind='stable'):
        cap_a = caps[a]
        if cap_a >= best:
            break
        usable = np.flatnonzero(caps < best)
        m0, n0 = m_index[usable], n_index[usable]
        m_req = np.maximum(
            delta_units - (m0 + m_index[a]), delta_units + 4 * n - (n0 + n_index[a])
        )
        n_req = np.maximum(
            delta_units - m0 + n_index[a], delta_units + 4 * n - n0 + m_index[a]
        )
        rows = np.clip(m_req + 2 * n, 0, 4 * n + 1)
        cols = np.clip(n_req, 0, 4 * n + 1)
        values = np.maximum(np.maximum(caps[usable], cap_a), best_pair1[rows, cols])
        k = int(np.argmin(values))
        if values[k] < best:
            best = float(values[k])
            best_pair = (int(usable[k]), int(a))

    if not np.isfinite(best):
        raise ValueError(f'no lattice point at step {step} satisfies delta={delta}')
    pair0, pair_a = best_pair
    m_req = max(
        delta_units - (m_index[pair0] + m_index[pair_a]),
        delta_units + 4 * n - (n_index[pair0] + n_index[pair_a]),
    )
    n_req = max(
        delta_units - m_index[pair0] + n_index[pair_a],
        delta_units + 4 * n - n_index[pair0] + m_index[pair_a],
    )
    allowed = (m_index >= m_req) & (n_index >= n_req)
    pair1 = int(np.flatnonzero(allowed)[np.argmin(caps[allowed])])
    # label order: x_a1, y_a1, x_b0, y_b0, x_b1, y_b1
    point = np.array(
        [
            coords[first[pair_a]],
            coords[second[pair_a]],
            coords[first[pair0]],
            coords[second[pair0]],
            coords[first[pair1]],
            coords[second[pair1]],
        ]
    )
    return GridPoint(value=best, point=point)


def _directions(dim: int, radius: int) -> np.ndarray:
    return np.array(list(product(range(-radius, radius + 1), repeat=dim)), dtype=float)


def refine(
    delta: float, start: np.ndarray, step: float, min_step: float = REFINE_MIN_STEP
) -> GridPoint:
    """Local grids of radius REFINE_RADIUS around the incumbent, halving the spacing each round."""
    poly = build_q_delta(2, delta)
    a_ub, b_ub, _, _ = poly.as_arrays()
    layout = channel_layout(2)
    offsets = _directions(poly.dim, REFINE_RADIUS)
    point = np.asarray(start, dtype=float)
    value = float(family_capacities(point, layout).max())
    spacing = step / 2.0
    while spacing >= min_step:
        candidates = point + spacing * offsets
        feasible = (candidates @ a_ub.T <= b_ub + FEASIBILITY_TOL).all(axis=1)
        if feasible.any():
            pool = candidates[feasible]
            values = family_capacities(pool, layout).max(axis=1)
            k = int(np.argmin(values))
            if values[k] < value:
                point, value = pool[k], float(values[k])
                continue
        spacing /= 2.0
    return GridPoint(value=value, point=point)


def _family_seed(delta: float, n: int) -> Optional[np.ndarray]:
    """Optimal-family point rounded to the lattice, if it stays feasible."""
    x_star = optimal_family(delta).x_star
    witness = family_witness(delta, x_star).as_array()
    rounded = [Fraction(round(v * n), n) for v in witness]
    poly = build_q_delta(2, delta)
    return np.array([float(v) for v in rounded]) if poly.contains(rounded) else None


@timed('strength.grid_oracle')
def grid_oracle(delta: float, step: float = 0.01, refine_result: bool = True) -> float:
    """Upper bound on the two-setting communication strength from feasible grid points."""
    if rationalize(delta) == 0:
        return 0.0
    lattice = lattice_search(delta, step)
    if not refine_result:
        return lattice.value
    seeds: List[np.ndarray] = [lattice.point]
    family = _family_seed(delta, _lattice_size(step))
    if family is not None:
        seeds.append(family)
    return min(refine(delta, seed, step).value for seed in seeds)
