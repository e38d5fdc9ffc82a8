from .canonical import (
    BoxKind,
    canonical_boxes,
    local_deterministic,
    pr_signs,
    pr_times_coin,
    random_box,
    random_nonsignaling,
    reference_box,
)
from .io import BoxFormatError, box_from_json, box_to_json, read_box, write_box
from .tables import (
    NORM_TOL,
    PROB_TOL,
    SIGNS,
    CorrelatorKey,
    NegativeProbability,
    NonFiniteProbability,
    NotNormalized,
    ScenarioMismatch,
    TripartiteBox,
    TwoBody,
    apply_sign_flips,
    canonicalize_signs,
    chained_signs,
    check_no_signaling,
    check_scenario,
    correlator,
    correlator_keys,
    correlator_vector,
    from_correlators,
    make_box,
    monogamy_functional,
    symmetrize,
)

__all__ = [
    'BoxFormatError',
    'BoxKind',
    'CorrelatorKey',
    'NORM_TOL',
    'NegativeProbability',
    'NonFiniteProbability',
    'NotNormalized',
    'PROB_TOL',
    'SIGNS',
    'ScenarioMismatch',
    'TripartiteBox',
    'TwoBody',
    'apply_sign_flips',
    'box_from_json',
    'box_to_json',
    'canonical_boxes',
    'canonicalize_signs',
    'chained_signs',
    'check_no_signaling',
    'check_scenario',
    'correlator',
    'correlator_keys',
    'correlator_vector',
    'from_correlators',
    'local_deterministic',
    'make_box',
    'monogamy_functional',
    'pr_signs',
    'pr_times_coin',
    'random_box',
    'random_nonsignaling',
    'read_box',
    'reference_box',
    'symmetrize',
    'write_box',
]
