from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np

from app.schemas.core import (
    BellScenario,
    CorrelatorVector,
    NoSignalingReport,
    PartyPair,
    SignFlipRecord,
    correlator_labels,
)

PROB_TOL = 1e-12
NORM_TOL = 1e-9
# outcome index 0 is +1, index 1 is -1, in memory and on disk
SIGNS = np.array([1.0, -1.0])

CorrelatorKey = Tuple[str, int, int]


class NegativeProbability(ValueError):
    def __init__(self, index: Tuple[int, ...], value: float) -> None:
        i, j = index[0], index[1]
        super().__init__(
            f'negative probability {value:.3g} at setting pair (A{i}, B{j}), entry {index}'
        )
        self.index = index
        self.value = value


class NonFiniteProbability(ValueError):
    def __init__(self, index: Tuple[int, ...], value: float) -> None:
        i, j = index[0], index[1]
        super().__init__(
            f'non-finite probability {value} at setting pair (A{i}, B{j}), entry {index}'
        )
        self.index = index
        self.value = value


class NotNormalized(ValueError):
    def __init__(self, i: int, j: int, total: float) -> None:
        super().__init__(f'probabilities for setting pair (A{i}, B{j}) sum to {total!r}, not 1')
        self.i = i
        self.j = j
        self.total = total


class ScenarioMismatch(ValueError):
    pass


class TwoBody(NamedTuple):
    """M x M arrays indexed [i][j] (A setting, B setting)."""

    ab: np.ndarray
    ae: np.ndarray
    be: np.ndarray


@dataclass(frozen=True)
class TripartiteBox:
    """Validated table p(a, b, e | A_i, B_j) of shape (M, M, 2, 2, 2)."""

    scenario: BellScenario
    table: np.ndarray

    @property
    def m(self) -> int:
        return self.scenario.m

    def two_body(self) -> TwoBody:
        return TwoBody(
            ab=np.einsum('ijabe,a,b->ij', self.table, SIGNS, SIGNS),
            ae=np.einsum('ijabe,a,e->ij', self.table, SIGNS, SIGNS),
            be=np.einsum('ijabe,b,e->ij', self.table, SIGNS, SIGNS),
        )

    def singles(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (
            np.einsum('ijabe,a->ij', self.table, SIGNS),
            np.einsum('ijabe,b->ij', self.table, SIGNS),
            np.einsum('ijabe,e->ij', self.table, SIGNS),
        )

    def triple(self) -> np.ndarray:
        return np.einsum('ijabe,a,b,e->ij', self.table, SIGNS, SIGNS, SIGNS)


def make_box(
    scenario: BellScenario,
    table: np.ndarray,
    prob_tol: float = PROB_TOL,
    norm_tol: float = NORM_TOL,
) -> TripartiteBox:
    data = np.array(table, dtype=float)
    if data.shape != scenario.shape:
        raise ValueError(f'table shape {data.shape} does not match scenario shape {scenario.shape}')
    finite = np.isfinite(data)
    if not finite.all():
        index = tuple(int(k) for k in np.argwhere(~finite)[0])
        raise NonFiniteProbability(index, float(data[index]))
    if data.min() < -prob_tol:
        index = tuple(int(k) for k in np.unravel_index(int(np.argmin(data)), data.shape))
        raise NegativeProbability(index, float(data[index]))
    totals = data.sum(axis=(2, 3, 4))
    bad = np.argwhere(np.abs(totals - 1.0) > norm_tol)
    if bad.size:
        i, j = (int(k) for k in bad[0])
        raise NotNormalized(i, j, float(totals[i, j]))
    data.setflags(write=False)
    return TripartiteBox(scenario=scenario, table=data)


def chained_signs(m: int) -> np.ndarray:
    """Coefficients K[i, j] of <A_i B_j> in the chained expression, with A_M = -A_0.

    For m = 2 this is the CHSH combination <A0B0> + <A1B0> + <A1B1> - <A0B1>.
    """
    coefficients = np.zeros((m, m))
    for k in range(m):
        coefficients[k, k] += 1.0
        if k + 1 < m:
            coefficients[k + 1, k] += 1.0
        else:
            coefficients[0, k] -= 1.0
    return coefficients


def correlator(
    box: TripartiteBox,
    pair: PartyPair,
    setting_pair: Tuple[int, int],
    conditioning: int = 0,
) -> float:
    """Conditional two-body correlator.

    ``setting_pair`` names the settings of the two measured parties in the order of ``pair``; E
    only has setting 0. ``conditioning`` is the setting of the remaining party.
    """
    m = box.m
    first, second = setting_pair
    if pair == 'AB':
        i, j, e = first, second, conditioning
    elif pair == 'AE':
        i, e, j = first, second, conditioning
    elif pair == 'BE':
        j, e, i = first, second, conditioning
    else:
        raise ValueError(f'unknown party pair {pair!r}')
    if not (0 <= i < m and 0 <= j < m and e == 0):
        raise IndexError(f'settings (A{i}, B{j}, E{e}) out of range for m={m}')
    tb = box.two_body()
    return float({'AB': tb.ab, 'AE': tb.ae, 'BE': tb.be}[pair][i, j])


def correlator_keys(m: int, relaxed: bool = False) -> Dict[str, CorrelatorKey]:
    """Box correlator behind each coordinate label; keys are ('AE' | 'BE', A setting, B setting)."""
    keys: Dict[str, CorrelatorKey] = {}
    for i in range(1, m):
        keys[f'x_a{i}'] = ('BE', i, i)
        keys[f'y_a{i}'] = ('BE', (i + 1) % m, i)
    keys['x_b0'] = ('AE', 0, 0)
    keys['y_b0'] = ('AE', 0, m - 1)
    for i in range(1, m):
        keys[f'x_b{i}'] = ('AE', i, i - 1)
        keys[f'y_b{i}'] = ('AE', i, i)
    if relaxed:
        keys['x_a0'] = ('BE', 0, 0)
        keys['y_a0'] = ('BE', 1, 0)
    return {label: keys[label] for label in correlator_labels(m, relaxed)}


def correlator_vector(box: TripartiteBox, relaxed: bool = False) -> CorrelatorVector:
    tb = box.two_body()
    arrays = {'AE': tb.ae, 'BE': tb.be}
    values = [arrays[kind][i, j] for kind, i, j in correlator_keys(box.m, relaxed).values()]
    return CorrelatorVector.from_array(box.m, values, relaxed=relaxed)


def check_no_signaling(box: TripartiteBox, tol: float = NORM_TOL) -> NoSignalingReport:
    """Compare every marginal that must not depend on another party's setting."""
    table = box.table
    checks: List[Tuple[str, np.ndarray, int]] = [
        ('p(a,e|A{k})', table.sum(axis=3), 1),
        ('p(b,e|B{k})', table.sum(axis=2).transpose(1, 0, 2, 3), 1),
        ('p(a|A{k})', table.sum(axis=(3, 4)), 1),
        ('p(b|B{k})', table.sum(axis=(2, 4)).transpose(1, 0, 2), 1),
    ]
    worst = 0.0
    offending: List[str] = []
    for template, marginal, axis in checks:
        spread = marginal.max(axis=axis) - marginal.min(axis=axis)
        for k in range(box.m):
            gap = float(spread[k].max())
            worst = max(worst, gap)
            if gap > tol:
                offending.append(f'{template.format(k=k)} varies by {gap:.3g}')
    e_marginal = table.sum(axis=(2, 3)).reshape(-1, 2)
    e_gap = float((e_marginal.max(axis=0) - e_marginal.min(axis=0)).max())
    worst = max(worst, e_gap)
    if e_gap > tol:
        offending.append(f'p(e) varies by {e_gap:.3g}')
    return NoSignalingReport(
        is_nonsignaling=worst <= tol, worst_violation=worst, offending=offending
    )


def symmetrize(box: TripartiteBox) -> TripartiteBox:
    """Average with the all-outcomes-negated box; singles and triples vanish, pairs are kept."""
    table = 0.5 * (box.table + box.table[:, :, ::-1, ::-1, ::-1])
    return make_box(box.scenario, table)


def apply_sign_flips(box: TripartiteBox, record: SignFlipRecord) -> TripartiteBox:
    """Relabel outcomes; applying the same record twice restores the box."""
    table = np.array(box.table)
    for i in record.flip_a:
        if not 0 <= i < box.m:
            raise IndexError(f'A setting {i} out of range for m={box.m}')
        table[i] = table[i, :, ::-1, :, :].copy()
    if record.flip_e:
        table = table[..., ::-1]
    return make_box(box.scenario, table)


def canonicalize_signs(box: TripartiteBox) -> Tuple[TripartiteBox, SignFlipRecord]:
    """Flip all A observables if the chained value is negative and E if <B0E> is negative.

    <B0E> is read as <B0E>_{A0} + <B0E>_{A1}, which is twice the unconditioned value whenever the
    two conditionings agree.
    """
    tb = box.two_body()
    bell = float((chained_signs(box.m) * tb.ab).sum())
    b0e = float(tb.be[0, 0] + tb.be[1, 0])
    record = SignFlipRecord(flip_a=list(range(box.m)) if bell < 0 else [], flip_e=b0e < 0)
    if record.is_identity:
        return box, record
    return apply_sign_flips(box, record), record


def from_correlators(
    scenario: BellScenario,
    ab: np.ndarray,
    ae: np.ndarray,
    be: np.ndarray,
    prob_tol: float = PROB_TOL,
) -> TripartiteBox:
    """Box with the given two-body correlators and vanishing one- and three-body terms.

    p(a, b, e | A_i, B_j) = (1 + ab <A_iB_j> + ae <A_iE>_{B_j} + be <B_jE>_{A_i}) / 8.
    """
    arrays = [np.asarray(arr, dtype=float) for arr in (ab, ae, be)]
    for name, arr in zip(('ab', 'ae', 'be'), arrays):
        if arr.shape != (scenario.m, scenario.m):
            raise ValueError(f'{name} must have shape {(scenario.m, scenario.m)}, got {arr.shape}')
    ab_, ae_, be_ = (arr[:, :, None, None, None] for arr in arrays)
    sa = SIGNS[:, None, None]
    sb = SIGNS[None, :, None]
    se = SIGNS[None, None, :]
    table = (1.0 + ab_ * sa * sb + ae_ * sa * se + be_ * sb * se) / 8.0
    if table.min() < -prob_tol:
        index = tuple(int(k) for k in np.unravel_index(int(np.argmin(table)), table.shape))
        raise NegativeProbability(index, float(table[index]))
    for name, arr in zip(('ab', 'ae', 'be'), arrays):
        if np.any(np.abs(arr) > 1.0 + prob_tol):
            raise ValueError(f'{name} has correlators outside [-1, 1]')
    return make_box(scenario, np.clip(table, 0.0, None))


def monogamy_functional(box: TripartiteBox) -> float:
    """Chained value plus <B0E>_{A0} + <B0E>_{A1}, without absolute values."""
    tb = box.two_body()
    return float((chained_signs(box.m) * tb.ab).sum() + tb.be[0, 0] + tb.be[1, 0])


def check_scenario(box: TripartiteBox, m: Optional[int]) -> int:
    if m is not None and m != box.m:
        raise ScenarioMismatch(f'box has m={box.m}, expected m={m}')
    return box.m
