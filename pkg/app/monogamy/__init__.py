from .bell import StrictModeInapplicable, bell_value, monogamy_lhs
from .inequalities import (
    SIGN_PATTERNS,
    InequalitySet,
    SwapChoice,
    TripleInequality,
    all_swap_choices,
    base_members,
    find_minimal_sets,
    generate_inequality_set,
    summed_constraints,
    triple_inequality_holds,
    triple_value,
    verify_minimal_set,
)

__all__ = [
    'InequalitySet',
    'SIGN_PATTERNS',
    'StrictModeInapplicable',
    'SwapChoice',
    'TripleInequality',
    'all_swap_choices',
    'base_members',
    'bell_value',
    'find_minimal_sets',
    'generate_inequality_set',
    'monogamy_lhs',
    'summed_constraints',
    'triple_inequality_holds',
    'triple_value',
    'verify_minimal_set',
]
