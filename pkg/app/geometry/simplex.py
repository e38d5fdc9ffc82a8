from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from app.geometry.polytope import HPolytope, Number, Row, rationalize

ZERO = Fraction(0)


@dataclass(frozen=True)
class LPResult:
    """A feasible rational point, or ``feasible=False`` with the positive phase-one optimum."""

    feasible: bool
    point: Optional[Tuple[Fraction, ...]]
    pivots: int
    infeasibility: Fraction = ZERO


def _normalize(rows: Sequence[Tuple[Sequence[Number], Number]]) -> List[Row]:
    return [(tuple(rationalize(c) for c in a), rationalize(b)) for a, b in rows]


def lp_feasible(
    equalities: Sequence[Tuple[Sequence[Number], Number]],
    inequalities: Sequence[Tuple[Sequence[Number], Number]],
    dim: Optional[int] = None,
) -> LPResult:
    """Exact phase-one simplex over the rationals with Bland's rule.

    Free variables are split as x = u - v. Inequality rows with b >= 0 start with their slack
    basic; every other row gets an artificial variable. Feasible iff the artificial sum can be
    driven to zero.
    """
    eq_rows = _normalize(equalities)
    ub_rows = _normalize(inequalities)
    if dim is None:
        first = (eq_rows or ub_rows or [((), ZERO)])[0]
        dim = len(first[0])
    for a, _ in eq_rows + ub_rows:
        if len(a) != dim:
            raise ValueError(f'row with {len(a)} coefficients in a {dim}-dimensional problem')

    n_slack = len(ub_rows)
    structural = 2 * dim
    n_rows = len(ub_rows) + len(eq_rows)
    needs_artificial = [b < 0 for _, b in ub_rows] + [True] * len(eq_rows)
    n_art = sum(needs_artificial)
    width = structural + n_slack + n_art
    artificial_start = structural + n_slack

    tableau: List[List[Fraction]] = []
    basis: List[int] = []
    next_art = artificial_start
    for r, (a, b) in enumerate(ub_rows + eq_rows):
        row = [ZERO] * (width + 1)
        for k, c in enumerate(a):
            row[k] = c
            row[dim + k] = -c
        if r < n_slack:
            row[structural + r] = Fraction(1)
        row[width] = b
        if b < 0:
            row = [-v for v in row]
        if needs_artificial[r]:
            row[next_art] = Fraction(1)
            basis.append(next_art)
            next_art += 1
        else:
            basis.append(structural + r)
        tableau.append(row)

    # phase-one reduced costs: minimize the artificial sum
    objective = [ZERO] * (width + 1)
    for r in range(n_rows):
        if basis[r] >= artificial_start:
            for k in range(width + 1):
                if tableau[r][k]:
                    objective[k] -= tableau[r][k]
    for k in range(artificial_start, width):
        objective[k] = ZERO

    pivots = 0
    while True:
        entering = next((k for k in range(width) if objective[k] < 0), None)
        if entering is None:
            break
        leaving = None
        best: Optional[Tuple[Fraction, int]] = None
        for r in range(n_rows):
            coefficient = tableau[r][entering]
            if coefficient > 0:
                key = (tableau[r][width] / coefficient, basis[r])
                if best is None or key < best:
                    best, leaving = key, r
        if leaving is None:
            # phase one is bounded below by zero, so this cannot happen
            raise RuntimeError('phase-one simplex found an unbounded direction')
        _pivot(tableau, objective, leaving, entering)
        basis[leaving] = entering
        pivots += 1

    infeasibility = -objective[width]
    if infeasibility > 0:
        return LPResult(feasible=False, point=None, pivots=pivots, infeasibility=infeasibility)
    values = [ZERO] * width
    for r, column in enumerate(basis):
        values[column] = tableau[r][width]
    point = tuple(values[k] - values[dim + k] for k in range(dim))
    return LPResult(feasible=True, point=point, pivots=pivots)


def _pivot(tableau: List[List[Fraction]], objective: List[Fraction], r: int, k: int) -> None:
    pivot_row = tableau[r]
    pivot = pivot_row[k]
    if pivot != 1:
        pivot_row[:] = [v / pivot for v in pivot_row]
    nonzero = [c for c, v in enumerate(pivot_row) if v]
    for row in (*tableau, objective):
        if row is pivot_row:
            continue
        factor = row[k]
        if factor:
            for c in nonzero:
                row[c] -= factor * pivot_row[c]


def polytope_feasible(poly: HPolytope) -> LPResult:
    return lp_feasible(poly.equalities, poly.inequalities, dim=poly.dim)
