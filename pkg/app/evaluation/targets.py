from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from app.config import RunConfig, get_settings
from app.schemas.core import VerifyTarget

DEFAULT_TARGETS = '''
targets:
  appendix-a:
    q_vertices_in_slices: {expected: true}
    all_preimages_found: {expected: true}
  appendix-b:
    alpha_star:
      expected: 0.459
      tolerance: 0.002
      note: equalization root of C(1, a) = C(a, -a); 0.469 leaves a nonzero residual
    equalization_residual: {expected: 0.0, tolerance: 1.0e-9}
    c2: {expected: 0.158, tolerance: 0.002}
    subregion_value: {expected: 0.322, tolerance: 0.001}
    solver_c2: {expected: 0.158, tolerance: 0.002}
    reference_box_lhs: {expected: 6.0, tolerance: 1.0e-9}
    reference_box_capacity: {expected: 0.158, tolerance: 0.002}
  minimal-set:
    count_m2: {expected: 1}
    count_m3: {expected: 1}
    count_m2_short: {expected: 0}
    count_m3_short: {expected: 0}
  properties:
    monogamy_nonsignaling: {expected: 4.0, tolerance: 1.0e-9}
    triple_inequalities: {expected: 0}
    capacity_vs_oracle: {expected: 0.0, tolerance: 1.0e-6}
    capacity_symmetries: {expected: 0.0, tolerance: 1.0e-9}
    capacity_midpoint_convexity: {expected: 0}
    family_in_polytope: {expected: 0}
'''


@dataclass(frozen=True)
class Target:
    name: str
    expected: Any
    tolerance: Optional[float] = None
    note: str = ''


class TargetStore:
    """Expected values for ``verify``, read from a YAML file seeded with DEFAULT_TARGETS."""

    def __init__(self, settings: Optional[RunConfig] = None) -> None:
        self.settings = settings or get_settings()
        self.path = Path(self.settings.TARGETS_PATH)
        self._cache = self._load()

    def _load(self) -> Dict[str, Any]:
        if self.path.exists():
            raw = yaml.safe_load(self.path.read_text(encoding='utf-8'))
        else:
            raw = yaml.safe_load(DEFAULT_TARGETS)
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.write_text(DEFAULT_TARGETS, encoding='utf-8')
        return raw.get('targets', raw)

    def targets(self, target: VerifyTarget) -> Dict[str, Target]:
        entries = self._cache.get(target)
        if entries is None:
            raise KeyError(f'no targets configured for {target!r} in {self.path}')
        return {
            name: Target(
                name=name,
                expected=spec['expected'],
                tolerance=spec.get('tolerance'),
                note=spec.get('note', ''),
            )
            for name, spec in entries.items()
        }
