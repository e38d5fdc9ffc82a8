from __future__ import annotations

import csv
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence

from app.channel import NoConvergence
from app.geometry import build_q_delta
from app.schemas.core import StrengthCurve, StrengthResult, StrengthRow, correlator_labels
from app.strength.analytic import optimal_family, single_channel_bound
from app.strength.solver import MAX_ITER, SOLVER_TOL, c_delta, minimax_capacity

CURVE_HEADER = ['delta', 'c_delta', 'family_value', 'gava_m2', 'gava_m3']

logger = logging.getLogger(__name__)


def chained_polytope_bound(
    m: int,
    delta: float,
    tol: float = SOLVER_TOL,
    max_iter: int = MAX_ITER,
    relaxed: bool = False,
) -> StrengthResult:
    """Min-max capacity over the chained polytope; exact for M = 2, a conjectured lower bound
    on the chained communication strength for larger M."""
    if not 2 <= m <= 4:
        raise ValueError(f'chained polytope bound supports 2 <= m <= 4, got {m}')
    if relaxed:
        if m != 2:
            raise ValueError(f'relaxed mode needs m=2, got {m}')
        return c_delta(delta, relaxed=True, tol=tol, max_iter=max_iter)
    return minimax_capacity(build_q_delta(m, delta), tol=tol, max_iter=max_iter, delta=delta)


def delta_grid(step: float) -> List[float]:
    count = int(round(2.0 / step))
    if count < 1 or abs(count * step - 2.0) > 1e-9:
        raise ValueError(f'step must divide 2, got {step}')
    return [round(k * 2.0 / count, 10) for k in range(count + 1)]


def _row(m: int, delta: float, tol: float, max_iter: int, relaxed: bool = False) -> StrengthRow:
    row = StrengthRow(
        delta=delta,
        gava_m2=single_channel_bound(2, delta),
        gava_m3=single_channel_bound(3, delta),
        family_value=optimal_family(delta).value if m == 2 else None,
    )
    try:
        result = chained_polytope_bound(m, delta, tol=tol, max_iter=max_iter, relaxed=relaxed)
    except NoConvergence as exc:
        logger.warning('no convergence at delta=%g: %s', delta, exc)
        return row.model_copy(update={'error': str(exc)})
    return row.model_copy(update={'c_delta': result.value, 'witness': result.witness})


def curve(
    m: int,
    deltas: Sequence[float],
    tol: float = SOLVER_TOL,
    max_iter: int = MAX_ITER,
    workers: int = 1,
    relaxed: bool = False,
) -> StrengthCurve:
    """One row per delta; rows are independent, so ``workers`` > 1 computes them on a thread
    pool and the output keeps the order of ``deltas``."""
    deltas = list(deltas)
    if any(b <= a for a, b in zip(deltas, deltas[1:])):
        raise ValueError('deltas must be strictly ascending')
    if any(not 0.0 <= d <= 2.0 for d in deltas):
        raise ValueError('deltas must lie in [0, 2]')
    if relaxed and m != 2:
        raise ValueError(f'relaxed mode needs m=2, got {m}')
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda d: _row(m, d, tol, max_iter, relaxed), deltas))
    else:
        rows = [_row(m, d, tol, max_iter, relaxed) for d in deltas]
    return StrengthCurve(m=m, rows=rows, relaxed=relaxed, conjectured=m >= 3, tolerance=tol)


def _fmt(value: Optional[float]) -> str:
    return '' if value is None else f'{value:.6f}'


def write_curve_csv(strength_curve: StrengthCurve, path: Path) -> Path:
    """``delta,c_delta,family_value,gava_m2,gava_m3`` then the witness coordinates."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    labels = list(correlator_labels(strength_curve.m, strength_curve.relaxed))
    with path.open('w', newline='', encoding='utf-8') as handle:
        writer = csv.writer(handle, lineterminator='\n')
        writer.writerow(CURVE_HEADER + labels)
        for row in strength_curve.rows:
            witness = row.witness.as_dict() if row.witness is not None else {}
            writer.writerow(
                [
                    _fmt(row.delta),
                    _fmt(row.c_delta),
                    _fmt(row.family_value),
                    _fmt(row.gava_m2),
                    _fmt(row.gava_m3),
                    *(_fmt(witness.get(label)) for label in labels),
                ]
            )
        failed = [f'{row.delta:g}' for row in strength_curve.failed_rows]
        if failed:
            handle.write(f'# solver did not converge for delta={",".join(failed)}\n')
        elif strength_curve.conjectured:
            handle.write('# c_delta is a conjectured lower bound for m >= 3\n')
    return path
