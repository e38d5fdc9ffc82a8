from __future__ import annotations

from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np

from app.box import random_nonsignaling, reference_box
from app.channel import capacity, capacity_array, capacity_oracle, channels_from_box
from app.config import RunConfig, get_settings
from app.evaluation.targets import Target, TargetStore
from app.geometry import build_q_delta, verify_characterization
from app.monogamy import SIGN_PATTERNS, monogamy_lhs, triple_value, verify_minimal_set
from app.schemas.core import BinaryChannel, CheckRow, VerificationReport, VerifyTarget
from app.strength import c2_analytic, c_delta, family_witness, optimal_family
from app.telemetry import reset_metrics, span, summarize

Checks = Dict[str, Target]
CheckRunner = Callable[[Checks, RunConfig, Optional[int]], List[CheckRow]]


def _numeric(target: Target, computed: float) -> CheckRow:
    tolerance = float(target.tolerance or 0.0)
    return CheckRow(
        name=target.name,
        expected=f'{float(target.expected):.6g}',
        computed=f'{computed:.6g}',
        tolerance=tolerance,
        passed=abs(computed - float(target.expected)) <= tolerance,
    )


def _at_most(target: Target, computed: float) -> CheckRow:
    """Computed value must not exceed the expected bound by more than the tolerance."""
    tolerance = float(target.tolerance or 0.0)
    return CheckRow(
        name=target.name,
        expected=f'<= {float(target.expected):.6g}',
        computed=f'{computed:.6g}',
        tolerance=tolerance,
        passed=computed <= float(target.expected) + tolerance,
    )


def _exact(target: Target, computed: object) -> CheckRow:
    return CheckRow(
        name=target.name,
        expected=str(target.expected),
        computed=str(computed),
        passed=computed == target.expected,
    )


def _appendix_a(
    targets: Checks, settings: RunConfig, drop_constraint: Optional[int]
) -> List[CheckRow]:
    report = verify_characterization(drop_constraint)
    return [
        _exact(targets['q_vertices_in_slices'], report.q_vertices_in_slices),
        _exact(targets['all_preimages_found'], report.all_preimages_found),
    ]


def _appendix_b(
    targets: Checks, settings: RunConfig, drop_constraint: Optional[int]
) -> List[CheckRow]:
    report = c2_analytic()
    with span('verify.solver_c2'):
        solved = c_delta(2.0, tol=settings.SOLVER_TOL, max_iter=settings.SOLVER_MAX_ITER)
    box = reference_box(2.0, optimal_family(2.0).x_star)
    lhs = monogamy_lhs(box, tol=settings.VIOLATION_TOL).lhs
    return [
        _numeric(targets['alpha_star'], report.alpha_star),
        _numeric(targets['equalization_residual'], report.residual),
        _numeric(targets['c2'], report.c2),
        _numeric(targets['subregion_value'], report.subregion_value),
        _numeric(targets['solver_c2'], solved.value),
        _numeric(targets['reference_box_lhs'], lhs),
        _numeric(targets['reference_box_capacity'], channels_from_box(box).max_capacity),
    ]


def _minimal_set(
    targets: Checks, settings: RunConfig, drop_constraint: Optional[int]
) -> List[CheckRow]:
    return [
        _exact(targets['count_m2'], verify_minimal_set(2)),
        _exact(targets['count_m3'], verify_minimal_set(3)),
        _exact(targets['count_m2_short'], verify_minimal_set(2, size=3)),
        _exact(targets['count_m3_short'], verify_minimal_set(3, size=5)),
    ]


def _properties(
    targets: Checks, settings: RunConfig, drop_constraint: Optional[int]
) -> List[CheckRow]:
    rng = np.random.default_rng(settings.SEED)
    samples = settings.PROPERTY_SAMPLES
    rows: List[CheckRow] = []

    with span('verify.monogamy_nonsignaling'):
        worst = max(
            monogamy_lhs(random_nonsignaling(2, seed=settings.SEED + k)).lhs
            for k in range(samples)
        )
    rows.append(_at_most(targets['monogamy_nonsignaling'], worst))

    with span('verify.triple_inequalities'):
        dists = rng.dirichlet(np.ones(8), size=samples)
        violations = sum(
            1
            for dist in dists
            for signs in SIGN_PATTERNS
            if triple_value(dist, signs) > 1.0 + 1e-12
        )
    rows.append(_exact(targets['triple_inequalities'], violations))

    channels = rng.uniform(0.0, 1.0, size=(settings.CHANNEL_SAMPLES, 2))
    with span('verify.capacity_oracle'):
        oracle_gap = max(
            abs(capacity(BinaryChannel(p=p, q=q)) - capacity_oracle(BinaryChannel(p=p, q=q)))
            for p, q in channels
        )
    rows.append(_at_most(targets['capacity_vs_oracle'], oracle_gap))

    p, q = channels[:, 0], channels[:, 1]
    base = capacity_array(p, q)
    swapped = np.abs(base - capacity_array(q, p)).max()
    flipped = np.abs(base - capacity_array(1 - p, 1 - q)).max()
    symmetry_gap = float(max(swapped, flipped))
    rows.append(_at_most(targets['capacity_symmetries'], symmetry_gap))

    other = rng.uniform(0.0, 1.0, size=(settings.CHANNEL_SAMPLES, 2))
    mid = (channels + other) / 2.0
    convex_failures = int(
        np.sum(
            capacity_array(mid[:, 0], mid[:, 1])
            > (base + capacity_array(other[:, 0], other[:, 1])) / 2.0 + 1e-12
        )
    )
    rows.append(_exact(targets['capacity_midpoint_convexity'], convex_failures))

    outside = 0
    for delta in (k / 20 for k in range(41)):
        witness = family_witness(delta, optimal_family(delta).x_star)
        if not build_q_delta(2, delta).contains(list(witness.as_array()), tol=1e-9):
            outside += 1
    rows.append(_exact(targets['family_in_polytope'], outside))
    return rows


CHECKS: Dict[str, CheckRunner] = {
    'appendix-a': _appendix_a,
    'appendix-b': _appendix_b,
    'minimal-set': _minimal_set,
    'properties': _properties,
}


def run_verification(
    target: VerifyTarget,
    settings: Optional[RunConfig] = None,
    drop_constraint: Optional[int] = None,
) -> VerificationReport:
    """Run one named verification and compare every computed value with its stored target."""
    settings = settings or get_settings()
    if target not in CHECKS:
        raise ValueError(f'unknown verification target {target!r}')
    targets = TargetStore(settings).targets(target)
    reset_metrics()
    with span(f'verify.{target}'):
        checks = CHECKS[target](targets, settings, drop_constraint)
    return VerificationReport(target=target, checks=checks, timings=summarize())


def write_report(report: VerificationReport, settings: Optional[RunConfig] = None) -> Path:
    settings = settings or get_settings()
    settings.REPORTS_DIR.mkdir(parents=True, exist_ok=True)
    path = settings.REPORTS_DIR / f'verify_{report.target}.json'
    path.write_text(report.model_dump_json(indent=2), encoding='utf-8')
    return path


__all__ = ['CHECKS', 'run_verification', 'write_report']
