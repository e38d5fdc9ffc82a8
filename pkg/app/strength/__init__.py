from .analytic import (
    FamilyPoint,
    NoRoot,
    c2_analytic,
    family_witness,
    optimal_family,
    single_channel_bound,
)
from .curve import chained_polytope_bound, curve, delta_grid, write_curve_csv
from .oracle import GridPoint, grid_oracle, lattice_search, refine
from .solver import averaged_subgradient, c_delta, channel_gradients, minimax_capacity

__all__ = [
    'FamilyPoint',
    'GridPoint',
    'NoRoot',
    'averaged_subgradient',
    'c2_analytic',
    'c_delta',
    'chained_polytope_bound',
    'channel_gradients',
    'curve',
    'delta_grid',
    'family_witness',
    'grid_oracle',
    'lattice_search',
    'minimax_capacity',
    'optimal_family',
    'refine',
    'single_channel_bound',
    'write_curve_csv',
]
