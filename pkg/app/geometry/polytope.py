from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from app.box import SIGNS, correlator_keys
from app.monogamy import summed_constraints
from app.schemas.core import correlator_labels

Number = Union[int, float, Fraction]
Row = Tuple[Tuple[Fraction, ...], Fraction]

DELTA_DENOMINATOR = 10**6

# coordinates of the M = 2 box polytope: <A_iB_j>_E, <A_iE>_{B_j}, <B_jE>_{A_i}
BOX_LABELS: Tuple[str, ...] = tuple(
    f'{kind}{i}{j}' for kind in ('ab', 'ae', 'be') for i in range(2) for j in range(2)
)


def rationalize(value: Number, max_denominator: int = DELTA_DENOMINATOR) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(value).limit_denominator(max_denominator)


def _row(coefficients: Iterable[Number], bound: Number) -> Row:
    return tuple(rationalize(c) for c in coefficients), rationalize(bound)


@dataclass(frozen=True)
class HPolytope:
    """{x : a.x <= b for every inequality, a.x = b for every equality}, exact rationals.

    ``summed_count`` inequalities at the front come from summed monogamy constraints; the rest
    are coordinate bounds or other trivial conditions.
    """

    dim: int
    inequalities: Tuple[Row, ...]
    equalities: Tuple[Row, ...] = ()
    labels: Tuple[str, ...] = ()
    m: Optional[int] = None
    delta: Optional[Fraction] = None
    relaxed: bool = False
    summed_count: int = 0

    def __post_init__(self) -> None:
        for kind, rows in (('inequality', self.inequalities), ('equality', self.equalities)):
            for k, (coefficients, _) in enumerate(rows):
                if len(coefficients) != self.dim:
                    raise ValueError(
                        f'{kind} {k} has {len(coefficients)} coefficients, expected {self.dim}'
                    )
        if self.labels and len(self.labels) != self.dim:
            raise ValueError(f'{len(self.labels)} labels for dimension {self.dim}')

    def as_arrays(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(A_ub, b_ub, A_eq, b_eq) as floats, the layout scipy.optimize.linprog expects."""

        def split(rows: Tuple[Row, ...]) -> Tuple[np.ndarray, np.ndarray]:
            if not rows:
                return np.zeros((0, self.dim)), np.zeros(0)
            return (
                np.array([[float(c) for c in a] for a, _ in rows]),
                np.array([float(b) for _, b in rows]),
            )

        a_ub, b_ub = split(self.inequalities)
        a_eq, b_eq = split(self.equalities)
        return a_ub, b_ub, a_eq, b_eq

    def contains(self, point: Sequence[Number], tol: float = 0.0) -> bool:
        """Exact for rational points; ``tol`` only matters for float points."""
        if len(point) != self.dim:
            raise ValueError(f'point has {len(point)} coordinates, expected {self.dim}')
        for a, b in self.inequalities:
            if sum(c * x for c, x in zip(a, point)) > b + tol:
                return False
        for a, b in self.equalities:
            if abs(sum(c * x for c, x in zip(a, point)) - b) > tol:
                return False
        return True

    def violations(self, point: Sequence[float]) -> np.ndarray:
        a_ub, b_ub, a_eq, b_eq = self.as_arrays()
        x = np.asarray(point, dtype=float)
        return np.concatenate([a_ub @ x - b_ub, np.abs(a_eq @ x - b_eq)])

    def without_inequality(self, index: int) -> 'HPolytope':
        if not 0 <= index < len(self.inequalities):
            raise IndexError(f'no inequality {index} in a polytope with {len(self.inequalities)}')
        rows = self.inequalities[:index] + self.inequalities[index + 1 :]
        summed = self.summed_count - 1 if index < self.summed_count else self.summed_count
        return replace(self, inequalities=rows, summed_count=summed)

    def restrict(self, fixed: Dict[int, Number]) -> 'HPolytope':
        """Substitute fixed values for some coordinates and drop them.

        Rows left without variables are checked directly; a violated one yields the empty
        polytope {0 <= -1} in the remaining coordinates.
        """
        keep = [k for k in range(self.dim) if k not in fixed]
        values = {k: rationalize(v) for k, v in fixed.items()}
        infeasible = False

        def substitute(rows: Tuple[Row, ...], equality: bool) -> List[Row]:
            nonlocal infeasible
            out: List[Row] = []
            for a, b in rows:
                rest = b - sum(a[k] * v for k, v in values.items())
                coefficients = tuple(a[k] for k in keep)
                if any(coefficients):
                    out.append((coefficients, rest))
                elif (rest != 0) if equality else (rest < 0):
                    infeasible = True
            return out

        inequalities = substitute(self.inequalities, equality=False)
        equalities = substitute(self.equalities, equality=True)
        if infeasible:
            inequalities.append(((Fraction(0),) * len(keep), Fraction(-1)))
        labels = tuple(self.labels[k] for k in keep) if self.labels else ()
        return HPolytope(
            dim=len(keep),
            inequalities=tuple(inequalities),
            equalities=tuple(equalities),
            labels=labels,
            m=self.m,
            delta=self.delta,
            relaxed=self.relaxed,
        )


def box_bounds(dim: int) -> List[Row]:
    rows: List[Row] = []
    for k in range(dim):
        for sign in (1, -1):
            coefficients = [0] * dim
            coefficients[k] = sign
            rows.append(_row(coefficients, 1))
    return rows


def build_q_delta(m: int, delta: Number, relaxed: bool = False) -> HPolytope:
    """Correlator vectors allowed for boxes that violate the monogamy relation by ``delta``.

    One row -d.c <= -delta per distinct summed constraint (4^{M-1} of them, 4^M in relaxed
    mode), then |c_k| <= 1 per coordinate.
    """
    if m < 2:
        raise ValueError(f'm must be at least 2, got {m}')
    value = rationalize(delta)
    if not 0 <= value <= 2:
        raise ValueError(f'delta must lie in [0, 2], got {delta}')
    labels = correlator_labels(m, relaxed)
    rows = [
        _row([-ineq_set.summed.get(label, 0) for label in labels], -value)
        for ineq_set in summed_constraints(m, relaxed)
    ]
    summed = len(rows)
    rows.extend(box_bounds(len(labels)))
    return HPolytope(
        dim=len(labels),
        inequalities=tuple(rows),
        labels=labels,
        m=m,
        delta=value,
        relaxed=relaxed,
        summed_count=summed,
    )


def build_q_lifted(drop_constraint: Optional[int] = None) -> HPolytope:
    """The M = 2 correlator polytope with delta as a seventh coordinate in [0, 2]."""
    labels = correlator_labels(2) + ('delta',)
    rows: List[Row] = []
    for k, ineq_set in enumerate(summed_constraints(2)):
        if k == drop_constraint:
            continue
        rows.append(_row([*(-ineq_set.summed.get(label, 0) for label in labels[:6]), 1], 0))
    summed = len(rows)
    rows.extend(box_bounds(7)[:12])
    rows.append(_row([0] * 6 + [-1], 0))
    rows.append(_row([0] * 6 + [1], 2))
    return HPolytope(dim=7, inequalities=tuple(rows), labels=labels, m=2, summed_count=summed)


def _box_index(kind: str, i: int, j: int) -> int:
    return BOX_LABELS.index(f'{kind}{i}{j}')


def box_correlator_map(relaxed: bool = False) -> Dict[str, int]:
    """Correlator label -> coordinate of the box polytope it reads."""
    return {
        label: _box_index(kind.lower(), i, j)
        for label, (kind, i, j) in correlator_keys(2, relaxed).items()
    }


def box_functional_row() -> Tuple[Fraction, ...]:
    """Coefficients of I + <B0E>_{A0} + <B0E>_{A1} over the box coordinates."""
    coefficients = [Fraction(0)] * len(BOX_LABELS)
    for (i, j), sign in {(0, 0): 1, (1, 0): 1, (1, 1): 1, (0, 1): -1}.items():
        coefficients[_box_index('ab', i, j)] = Fraction(sign)
    coefficients[_box_index('be', 0, 0)] += 1
    coefficients[_box_index('be', 1, 0)] += 1
    return tuple(coefficients)


def build_box_polytope() -> HPolytope:
    """Twelve two-body correlators of M = 2 boxes with vanishing singles and triples.

    32 rows keep every entry of the (1 + ab<AB> + ae<AE> + be<BE>)/8 expansion nonnegative,
    <B0E>_{A0} = <B0E>_{A1}, and 4 <= I + 2<B0E> <= 6.
    """
    rows: List[Row] = []
    for i, j in product(range(2), repeat=2):
        for sa, sb, se in product(SIGNS, repeat=3):
            coefficients = [0] * len(BOX_LABELS)
            coefficients[_box_index('ab', i, j)] = -int(sa * sb)
            coefficients[_box_index('ae', i, j)] = -int(sa * se)
            coefficients[_box_index('be', i, j)] = -int(sb * se)
            rows.append(_row(coefficients, 1))
    functional = box_functional_row()
    rows.append((tuple(-c for c in functional), Fraction(-4)))
    rows.append((functional, Fraction(6)))
    equality = [0] * len(BOX_LABELS)
    equality[_box_index('be', 0, 0)] = 1
    equality[_box_index('be', 1, 0)] = -1
    return HPolytope(
        dim=len(BOX_LABELS),
        inequalities=tuple(rows),
        equalities=(_row(equality, 0),),
        labels=BOX_LABELS,
        m=2,
    )


def dump_polytope(
    poly: HPolytope, vertices: Optional[Sequence[Sequence[Fraction]]] = None
) -> str:
    """Plain-text H-representation (coefficients, relation, bound) and optional vertex list."""
    lines = [
        f'# H-representation dim={poly.dim} m={poly.m} delta={poly.delta} relaxed={poly.relaxed}',
        f'# labels {" ".join(poly.labels)}',
    ]
    for a, b in poly.inequalities:
        lines.append(f'{" ".join(str(c) for c in a)} <= {str(b)}')
    for a, b in poly.equalities:
        lines.append(f'{" ".join(str(c) for c in a)} = {str(b)}')
    if vertices is not None:
        lines.append(f'# V-representation count={len(vertices)}')
        for vertex in vertices:
            lines.append(' '.join(str(Fraction(x)) for x in vertex))
    return '\n'.join(lines) + '\n'
