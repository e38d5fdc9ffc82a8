from .characterization import find_preimage, verify_characterization
from .polytope import (
    BOX_LABELS,
    HPolytope,
    box_correlator_map,
    box_functional_row,
    build_box_polytope,
    build_q_delta,
    build_q_lifted,
    dump_polytope,
    rationalize,
)
from .simplex import LPResult, lp_feasible, polytope_feasible
from .vertices import UnboundedPolytope, VertexSet, check_bounded, enumerate_vertices

__all__ = [
    'BOX_LABELS',
    'HPolytope',
    'LPResult',
    'UnboundedPolytope',
    'VertexSet',
    'box_correlator_map',
    'box_functional_row',
    'build_box_polytope',
    'build_q_delta',
    'build_q_lifted',
    'check_bounded',
    'dump_polytope',
    'enumerate_vertices',
    'find_preimage',
    'lp_feasible',
    'polytope_feasible',
    'rationalize',
    'verify_characterization',
]
