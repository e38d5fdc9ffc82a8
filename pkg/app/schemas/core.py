from __future__ import annotations

from typing import Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

StrengthMethod = Literal['minimax_solver', 'grid_oracle', 'optimal_family', 'analytic']
VerifyTarget = Literal['appendix-a', 'appendix-b', 'minimal-set', 'properties']
PartyPair = Literal['AB', 'AE', 'BE']

CORRELATOR_SLACK = 1e-6


def correlator_labels(m: int, relaxed: bool = False) -> Tuple[str, ...]:
    """Coordinate order: A-side pairs, then B-side pairs, then the relaxed pair."""
    labels: List[str] = []
    for i in range(1, m):
        labels.extend((f'x_a{i}', f'y_a{i}'))
    for i in range(m):
        labels.extend((f'x_b{i}', f'y_b{i}'))
    if relaxed:
        labels.extend(('x_a0', 'y_a0'))
    return tuple(labels)


class BellScenario(BaseModel):
    """M settings for A and B, one setting for E, two outcomes everywhere."""

    model_config = ConfigDict(frozen=True)

    m: int = Field(ge=2)

    @property
    def settings_a(self) -> int:
        return self.m

    @property
    def settings_b(self) -> int:
        return self.m

    @property
    def settings_e(self) -> int:
        return 1

    @property
    def shape(self) -> Tuple[int, int, int, int, int]:
        return (self.m, self.m, 2, 2, 2)


class SignFlipRecord(BaseModel):
    flip_a: List[int] = Field(default_factory=list)
    flip_e: bool = False

    @property
    def is_identity(self) -> bool:
        return not self.flip_a and not self.flip_e


class CorrelatorVector(BaseModel):
    """Conditional two-body correlators that pair up into signaling channels.

    ``x_a``/``y_a`` hold the A-side pairs for i = 1..M-1 (list index i-1), ``x_b``/``y_b`` the
    B-side pairs for i = 0..M-1. ``x_a0``/``y_a0`` are only present in relaxed mode.
    """

    model_config = ConfigDict(frozen=True)

    m: int = Field(ge=2)
    x_a: List[float]
    y_a: List[float]
    x_b: List[float]
    y_b: List[float]
    x_a0: Optional[float] = None
    y_a0: Optional[float] = None

    @model_validator(mode='after')
    def _check_shape_and_range(self) -> 'CorrelatorVector':
        if len(self.x_a) != self.m - 1 or len(self.y_a) != self.m - 1:
            raise ValueError(f'x_a/y_a need {self.m - 1} entries for m={self.m}')
        if len(self.x_b) != self.m or len(self.y_b) != self.m:
            raise ValueError(f'x_b/y_b need {self.m} entries for m={self.m}')
        if (self.x_a0 is None) != (self.y_a0 is None):
            raise ValueError('x_a0 and y_a0 must be given together')
        for label, value in zip(self.labels, self.as_array()):
            if not -1.0 - 1e-9 <= value <= 1.0 + 1e-9:
                raise ValueError(f'{label}={value} outside [-1, 1]')
        return self

    @property
    def relaxed(self) -> bool:
        return self.x_a0 is not None

    @property
    def labels(self) -> Tuple[str, ...]:
        return correlator_labels(self.m, self.relaxed)

    def as_array(self) -> np.ndarray:
        values: List[float] = []
        for x, y in zip(self.x_a, self.y_a):
            values.extend((x, y))
        for x, y in zip(self.x_b, self.y_b):
            values.extend((x, y))
        if self.relaxed:
            values.extend((self.x_a0, self.y_a0))  # type: ignore[arg-type]
        return np.asarray(values, dtype=float)

    def as_dict(self) -> Dict[str, float]:
        return dict(zip(self.labels, (float(v) for v in self.as_array())))

    @classmethod
    def from_array(
        cls, m: int, values: Sequence[float], relaxed: bool = False
    ) -> 'CorrelatorVector':
        arr = np.asarray(values, dtype=float)
        labels = correlator_labels(m, relaxed)
        if arr.shape != (len(labels),):
            raise ValueError(f'expected {len(labels)} correlators for m={m}, got shape {arr.shape}')
        outside = np.flatnonzero(~(np.abs(arr) <= 1.0 + CORRELATOR_SLACK))
        if outside.size:
            k = int(outside[0])
            raise ValueError(f'{labels[k]}={arr[k]} outside [-1, 1]')
        # round-off only past this point
        arr = np.clip(arr, -1.0, 1.0)
        a_side = arr[: 2 * (m - 1)]
        b_side = arr[2 * (m - 1) : 2 * (m - 1) + 2 * m]
        extra = arr[2 * (m - 1) + 2 * m :]
        return cls(
            m=m,
            x_a=[float(v) for v in a_side[0::2]],
            y_a=[float(v) for v in a_side[1::2]],
            x_b=[float(v) for v in b_side[0::2]],
            y_b=[float(v) for v in b_side[1::2]],
            x_a0=float(extra[0]) if relaxed else None,
            y_a0=float(extra[1]) if relaxed else None,
        )


class NoSignalingReport(BaseModel):
    is_nonsignaling: bool
    worst_violation: float
    offending: List[str] = Field(default_factory=list)


class MonogamyReport(BaseModel):
    lhs: float
    bound: float
    delta: float
    relaxed: bool = False
    tolerance: float = 1e-9

    @computed_field  # type: ignore[misc]
    @property
    def violation(self) -> float:
        return max(self.delta, 0.0)

    @computed_field  # type: ignore[misc]
    @property
    def violated(self) -> bool:
        return self.delta > self.tolerance


class BinaryChannel(BaseModel):
    """p = P(Y=+1 | X=0), q = P(Y=+1 | X=1)."""

    model_config = ConfigDict(frozen=True)

    p: float = Field(ge=0.0, le=1.0)
    q: float = Field(ge=0.0, le=1.0)


class ChannelReport(BaseModel):
    label: str
    p: float
    q: float
    capacity: float


class ChannelFamily(BaseModel):
    channels: List[ChannelReport]

    @computed_field  # type: ignore[misc]
    @property
    def max_capacity(self) -> float:
        return max((ch.capacity for ch in self.channels), default=0.0)

    def by_label(self) -> Dict[str, ChannelReport]:
        return {ch.label: ch for ch in self.channels}


class StrengthResult(BaseModel):
    delta: float
    value: float
    witness: CorrelatorVector
    method: StrengthMethod
    iterations: int = 0
    lower_bound: Optional[float] = None
    converged: bool = True
    conjectured: bool = False

    @computed_field  # type: ignore[misc]
    @property
    def label(self) -> str:
        return 'conjectured lower bound' if self.conjectured else 'exact'


class StrengthRow(BaseModel):
    delta: float
    c_delta: Optional[float] = None
    family_value: Optional[float] = None
    gava_m2: float
    gava_m3: float
    witness: Optional[CorrelatorVector] = None
    error: Optional[str] = None


class StrengthCurve(BaseModel):
    m: int
    rows: List[StrengthRow]
    relaxed: bool = False
    conjectured: bool = False
    tolerance: float = 1e-6

    @computed_field  # type: ignore[misc]
    @property
    def monotone(self) -> bool:
        values = [row.c_delta for row in self.rows if row.c_delta is not None]
        return all(b >= a - self.tolerance for a, b in zip(values, values[1:]))

    @property
    def failed_rows(self) -> List[StrengthRow]:
        return [row for row in self.rows if row.error is not None]


class C2Report(BaseModel):
    alpha_star: float
    c2: float
    subregion_value: float
    residual: float


class CharacterizationReport(BaseModel):
    q_vertices_in_slices: bool
    all_preimages_found: bool
    vertex_counts: Dict[str, int]
    failures: List[List[str]] = Field(default_factory=list)
    dropped_constraint: Optional[int] = None


class CheckRow(BaseModel):
    name: str
    expected: str
    computed: str
    tolerance: Optional[float] = None
    passed: bool


class VerificationReport(BaseModel):
    target: VerifyTarget
    checks: List[CheckRow]
    timings: Dict[str, Dict[str, float]] = Field(default_factory=dict)

    @computed_field  # type: ignore[misc]
    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


class BoxCheckReport(BaseModel):
    path: str
    m: int
    relaxed: bool
    no_signaling: NoSignalingReport
    monogamy: Optional[MonogamyReport] = None
    monogamy_error: Optional[str] = None
    channels: ChannelFamily
