from __future__ import annotations

import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from app.geometry.polytope import (
    HPolytope,
    box_correlator_map,
    box_functional_row,
    build_box_polytope,
    build_q_lifted,
)
from app.geometry.simplex import LPResult, lp_feasible
from app.geometry.vertices import enumerate_vertices
from app.schemas.core import CharacterizationReport, correlator_labels
from app.telemetry import span

logger = logging.getLogger(__name__)


def find_preimage(
    correlators: Sequence[Fraction], delta: Fraction, box_poly: Optional[HPolytope] = None
) -> LPResult:
    """Look for box correlators p in the box polytope with phi(p) = c and functional 4 + delta.

    The six coordinates read by phi are substituted before the LP is built.
    """
    box_poly = box_poly or build_box_polytope()
    mapping = box_correlator_map()
    fixed = {mapping[label]: value for label, value in zip(correlator_labels(2), correlators)}
    reduced = box_poly.restrict(fixed)
    functional = box_functional_row()
    keep = [k for k in range(box_poly.dim) if k not in fixed]
    offset = sum(functional[k] * v for k, v in fixed.items())
    target = (tuple(functional[k] for k in keep), 4 + delta - offset)
    return lp_feasible(
        list(reduced.equalities) + [target], reduced.inequalities, dim=reduced.dim
    )


def verify_characterization(drop_constraint: Optional[int] = None) -> CharacterizationReport:
    """Check that the inequality description of the M = 2 correlator polytope is exact.

    (a) every vertex of the lifted polytope (six correlators plus delta) sits at delta = 0 or
    delta = 2; (b) every vertex has a box preimage. ``drop_constraint`` removes one summed
    constraint as a negative control.
    """
    lifted = build_q_lifted(drop_constraint)
    with span('characterization.vertices'):
        vertices = enumerate_vertices(lifted)
    in_slices = all(v[-1] in (0, 2) for v in vertices)
    counts: Dict[str, int] = {
        'q_v': len(vertices),
        'delta_0': sum(1 for v in vertices if v[-1] == 0),
        'delta_2': sum(1 for v in vertices if v[-1] == 2),
    }
    logger.info('lifted polytope has %d vertices', counts['q_v'])

    box_poly = build_box_polytope()
    failures: List[List[str]] = []
    with span('characterization.preimages'):
        for vertex in vertices:
            result = find_preimage(vertex[:-1], vertex[-1], box_poly)
            if not result.feasible:
                failures.append([str(x) for x in vertex])
    if failures:
        logger.info('%d vertices have no box preimage', len(failures))
    return CharacterizationReport(
        q_vertices_in_slices=in_slices,
        all_preimages_found=not failures,
        vertex_counts=counts,
        failures=failures,
        dropped_constraint=drop_constraint,
    )
