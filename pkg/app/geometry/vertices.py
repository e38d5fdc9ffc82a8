from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, lcm
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from app.geometry.polytope import HPolytope, Row
from app.geometry.simplex import lp_feasible

Vertex = Tuple[Fraction, ...]
MAX_SUBSETS = 5_000_000


class UnboundedPolytope(ValueError):
    def __init__(self, coordinate: int, direction: int) -> None:
        label = '+' if direction > 0 else '-'
        super().__init__(f'polytope is unbounded along {label}x{coordinate}')
        self.coordinate = coordinate
        self.direction = direction


@dataclass(frozen=True)
class VertexSet:
    vertices: Tuple[Vertex, ...]
    labels: Tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self) -> Iterator[Vertex]:
        return iter(self.vertices)

    def as_array(self) -> np.ndarray:
        return np.array([[float(x) for x in v] for v in self.vertices], dtype=float)


def _integer_row(a: Sequence[Fraction], b: Fraction) -> List[int]:
    scale = lcm(*(x.denominator for x in (*a, b)))
    return [int(x * scale) for x in (*a, b)]


def _solve(rows: Sequence[List[int]], n: int) -> Optional[Vertex]:
    """Unique solution of a square integer system [A | b] or None if A is singular.

    Fraction-free (Bareiss) forward elimination, rational back substitution.
    """
    matrix = [list(row) for row in rows]
    previous = 1
    for k in range(n):
        pivot_row = next((r for r in range(k, n) if matrix[r][k] != 0), None)
        if pivot_row is None:
            return None
        if pivot_row != k:
            matrix[k], matrix[pivot_row] = matrix[pivot_row], matrix[k]
        pivot = matrix[k][k]
        for r in range(k + 1, n):
            lead = matrix[r][k]
            row = matrix[r]
            top = matrix[k]
            for c in range(k, n + 1):
                row[c] = (row[c] * pivot - lead * top[c]) // previous
        previous = pivot
    solution: List[Fraction] = [Fraction(0)] * n
    for k in range(n - 1, -1, -1):
        total = Fraction(matrix[k][n])
        for c in range(k + 1, n):
            total -= matrix[k][c] * solution[c]
        solution[k] = total / matrix[k][k]
    return tuple(solution)


def _independent_equalities(rows: Sequence[Row], dim: int) -> List[Row]:
    """Drop equalities that are linear combinations of earlier ones."""
    kept: List[Row] = []
    basis: List[List[Fraction]] = []
    pivots: List[int] = []
    for a, b in rows:
        reduced = list(a)
        for vec, p in zip(basis, pivots):
            if reduced[p]:
                factor = reduced[p] / vec[p]
                reduced = [x - factor * y for x, y in zip(reduced, vec)]
        lead = next((k for k in range(dim) if reduced[k]), None)
        if lead is not None:
            basis.append(reduced)
            pivots.append(lead)
            kept.append((a, b))
    return kept


def check_bounded(poly: HPolytope) -> None:
    """Raise UnboundedPolytope if the recession cone {y : Ay <= 0, Ey = 0} is not {0}."""
    bounded_above = set()
    bounded_below = set()
    for a, _ in poly.inequalities:
        support = [k for k, c in enumerate(a) if c]
        if len(support) == 1:
            (bounded_above if a[support[0]] > 0 else bounded_below).add(support[0])
    if bounded_above.issuperset(range(poly.dim)) and bounded_below.issuperset(range(poly.dim)):
        return
    cone_ub = [(a, 0) for a, _ in poly.inequalities]
    cone_eq = [(a, 0) for a, _ in poly.equalities]
    for k in range(poly.dim):
        for direction in (1, -1):
            unit = [0] * poly.dim
            unit[k] = -direction
            if lp_feasible(cone_eq, cone_ub + [(unit, -1)], dim=poly.dim).feasible:
                raise UnboundedPolytope(k, direction)


def enumerate_vertices(poly: HPolytope, max_subsets: int = MAX_SUBSETS) -> VertexSet:
    """Exact vertices by exhaustive search over basic solutions.

    Every choice of dim - rank(E) inequalities is solved together with the equalities; unique
    solutions that satisfy all rows are vertices. The result is deduplicated and sorted.
    """
    check_bounded(poly)
    equalities = _independent_equalities(poly.equalities, poly.dim)
    free = poly.dim - len(equalities)
    if free < 0 or free > len(poly.inequalities):
        return VertexSet(vertices=(), labels=poly.labels)
    subsets = comb(len(poly.inequalities), free)
    if subsets > max_subsets:
        raise ValueError(f'{subsets} constraint subsets exceed the limit of {max_subsets}')

    eq_int = [_integer_row(a, b) for a, b in equalities]
    ub_int = [_integer_row(a, b) for a, b in poly.inequalities]
    all_eq_int = [_integer_row(a, b) for a, b in poly.equalities]
    found = set()
    for chosen in combinations(range(len(ub_int)), free):
        vertex = _solve(eq_int + [ub_int[k] for k in chosen], poly.dim)
        if vertex is None or vertex in found:
            continue
        scale = lcm(*(x.denominator for x in vertex)) if vertex else 1
        numerators = [int(x * scale) for x in vertex]
        if all(
            sum(c * x for c, x in zip(row[:-1], numerators)) <= row[-1] * scale for row in ub_int
        ) and all(
            sum(c * x for c, x in zip(row[:-1], numerators)) == row[-1] * scale
            for row in all_eq_int
        ):
            found.add(vertex)
    return VertexSet(vertices=tuple(sorted(found)), labels=poly.labels)
