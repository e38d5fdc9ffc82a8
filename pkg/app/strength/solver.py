from __future__ import annotations

from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import linprog

from app.channel import (
    CAPACITY_EPS,
    ChannelSlot,
    NoConvergence,
    capacity_gradient,
    channel_layout,
    family_capacities,
)
from app.geometry import HPolytope, build_q_delta
from app.schemas.core import CorrelatorVector, StrengthResult
from app.telemetry import timed

SOLVER_TOL = 1e-6
MAX_ITER = 500
TIE_TOL = 1e-9
CUT_MARGIN = 1e-9
LP_OPTIONS = {'primal_feasibility_tolerance': 1e-10, 'dual_feasibility_tolerance': 1e-10}

Layout = Tuple[ChannelSlot, ...]


def channel_gradients(point: np.ndarray, layout: Layout) -> Tuple[np.ndarray, np.ndarray]:
    """Capacities of every channel and their gradients in correlator coordinates."""
    point = np.asarray(point, dtype=float)
    xs = point[[slot.x_index for slot in layout]]
    ys = point[[slot.y_index for slot in layout]]
    values = family_capacities(point, layout)
    grad_p, grad_q = capacity_gradient((1.0 + xs) / 2.0, (1.0 + ys) / 2.0)
    grads = np.zeros((len(layout), point.size))
    for k, slot in enumerate(layout):
        # p = (1 + x)/2
        grads[k, slot.x_index] += grad_p[k] / 2.0
        grads[k, slot.y_index] += grad_q[k] / 2.0
    return values, grads


def averaged_subgradient(
    point: np.ndarray, layout: Layout, tie_tol: float = TIE_TOL
) -> np.ndarray:
    """Mean gradient of the channels within ``tie_tol`` of the largest capacity."""
    values, grads = channel_gradients(point, layout)
    active = values >= values.max() - tie_tol
    return grads[active].mean(axis=0)


def _start_point(poly: HPolytope, layout: Layout) -> np.ndarray:
    """Vertex minimizing the total signal sum |x - y| over all channels; reproducible."""
    dim, pairs = poly.dim, len(layout)
    a_ub, b_ub, a_eq, b_eq = poly.as_arrays()
    signal = np.zeros((2 * pairs, dim + pairs))
    for k, slot in enumerate(layout):
        for row, sign in ((2 * k, 1.0), (2 * k + 1, -1.0)):
            signal[row, slot.x_index] = sign
            signal[row, slot.y_index] = -sign
            signal[row, dim + k] = -1.0
    result = linprog(
        np.concatenate([np.zeros(dim), np.ones(pairs)]),
        A_ub=np.vstack([np.hstack([a_ub, np.zeros((len(a_ub), pairs))]), signal]),
        b_ub=np.concatenate([b_ub, np.zeros(2 * pairs)]),
        A_eq=np.hstack([a_eq, np.zeros((len(a_eq), pairs))]) if len(a_eq) else None,
        b_eq=b_eq if len(b_eq) else None,
        bounds=[(-1.0, 1.0)] * dim + [(0.0, 2.0)] * pairs,
        method='highs-ds',
        options=LP_OPTIONS,
    )
    if result.status != 0:
        raise ValueError(f'polytope is empty or the start LP failed: {result.message}')
    return np.asarray(result.x[:dim])


@timed('strength.minimax')
def minimax_capacity(
    poly: HPolytope,
    layout: Optional[Layout] = None,
    tol: float = SOLVER_TOL,
    max_iter: int = MAX_ITER,
    delta: Optional[float] = None,
) -> StrengthResult:
    """Minimize the largest channel capacity over ``poly`` with Kelley's cutting planes.

    Each capacity is convex, so tangent planes taken at visited points under-estimate it; the LP
    over the polytope and all cuts gives a lower bound and the visited points an upper bound.
    """
    if poly.m is None:
        raise ValueError('polytope carries no scenario size')
    layout = layout or channel_layout(poly.m, poly.relaxed)
    dim = poly.dim
    a_ub, b_ub, a_eq, b_eq = poly.as_arrays()
    point = _start_point(poly, layout)

    cut_rows: List[np.ndarray] = []
    cut_rhs: List[float] = []
    best_value = np.inf
    best_point = point
    lower = 0.0
    objective = np.zeros(dim + 1)
    objective[-1] = 1.0
    poly_rows = np.hstack([a_ub, np.zeros((len(a_ub), 1))])
    eq_rows = np.hstack([a_eq, np.zeros((len(a_eq), 1))]) if len(a_eq) else None

    for iteration in range(1, max_iter + 1):
        values = family_capacities(point, layout, CAPACITY_EPS)
        current = float(values.max())
        if current < best_value:
            best_value, best_point = current, point
        if best_value - lower <= tol:
            return _result(poly, best_point, best_value, lower, iteration, delta)

        # tangent planes at a point pulled slightly inside the square keep gradients finite
        anchor = np.clip(point, -1.0 + 2e-12, 1.0 - 2e-12)
        anchor_values, grads = channel_gradients(anchor, layout)
        for value, grad in zip(anchor_values, grads):
            cut_rows.append(np.append(grad, -1.0))
            cut_rhs.append(float(grad @ anchor - value) + CUT_MARGIN)
        mean_grad = averaged_subgradient(anchor, layout)
        cut_rows.append(np.append(mean_grad, -1.0))
        cut_rhs.append(float(mean_grad @ anchor - anchor_values.max()) + CUT_MARGIN)

        result = linprog(
            objective,
            A_ub=np.vstack([poly_rows, np.array(cut_rows)]),
            b_ub=np.concatenate([b_ub, np.array(cut_rhs)]),
            A_eq=eq_rows,
            b_eq=b_eq if eq_rows is not None else None,
            bounds=[(-1.0, 1.0)] * dim + [(0.0, 1.0)],
            method='highs-ds',
            options=LP_OPTIONS,
        )
        if result.status != 0:
            raise NoConvergence(
                f'cutting-plane LP failed at iteration {iteration}: {result.message}',
                best=best_value,
                iterations=iteration,
            )
        lower = max(lower, float(result.x[-1]))
        point = np.asarray(result.x[:-1])

    raise NoConvergence(
        f'gap {best_value - lower:.3g} above {tol} after {max_iter} iterations',
        best=best_value,
        iterations=max_iter,
    )


def _result(
    poly: HPolytope,
    point: np.ndarray,
    value: float,
    lower: float,
    iterations: int,
    delta: Optional[float],
) -> StrengthResult:
    m = poly.m or 2
    witness = CorrelatorVector.from_array(m, point, relaxed=poly.relaxed)
    return StrengthResult(
        delta=float(delta) if delta is not None else float(poly.delta or 0),
        value=value,
        witness=witness,
        method='minimax_solver',
        iterations=iterations,
        lower_bound=lower,
        converged=True,
        conjectured=m >= 3,
    )


def _equalize_relaxed_pair(poly: HPolytope, result: StrengthResult) -> StrengthResult:
    """Move <B0E>_{A0} and <B0E>_{A1} to 1 when that keeps the witness feasible and optimal.

    Both coordinates enter every relaxed constraint with a nonnegative coefficient and the
    channel they form has capacity 0 at (1, 1).
    """
    labels = poly.labels
    point = result.witness.as_array()
    moved = point.copy()
    moved[labels.index('x_a0')] = 1.0
    moved[labels.index('y_a0')] = 1.0
    if poly.violations(moved).max() > 1e-9:
        return result
    value = float(family_capacities(moved, channel_layout(2, relaxed=True)).max())
    if value > result.value + 1e-12:
        return result
    witness = CorrelatorVector.from_array(2, moved, relaxed=True)
    return result.model_copy(update={'witness': witness, 'value': value})


def c_delta(
    delta: float, relaxed: bool = False, tol: float = SOLVER_TOL, max_iter: int = MAX_ITER
) -> StrengthResult:
    """Communication strength of two-setting boxes violating monogamy by ``delta``."""
    poly = build_q_delta(2, delta, relaxed=relaxed)
    result = minimax_capacity(poly, tol=tol, max_iter=max_iter, delta=delta)
    if relaxed:
        result = _equalize_relaxed_pair(poly, result)
    return result
