from __future__ import annotations

from typing import NamedTuple

from scipy.optimize import bisect

from app.channel import binary_entropy, correlator_capacity
from app.schemas.core import C2Report, CorrelatorVector

ROOT_XTOL = 1e-13


class NoRoot(RuntimeError):
    pass


class FamilyPoint(NamedTuple):
    x_star: float
    value: float


def single_channel_bound(m: int, delta: float) -> float:
    """1 - H((1 + delta/(4M-2))/2): the capacity left when a violation of ``delta`` is spread
    evenly over all 4M-2 correlators, one pair turning into a symmetric channel."""
    if m < 2:
        raise ValueError(f'm must be at least 2, got {m}')
    if not 0.0 <= delta <= 2.0:
        raise ValueError(f'delta must lie in [0, 2], got {delta}')
    return 1.0 - float(binary_entropy((1.0 + delta / (4 * m - 2)) / 2.0))


def _pair_capacity(x: float, y: float) -> float:
    return float(correlator_capacity(x, y))


def _equalize(first: float) -> float:
    """Root on [0, 1] of C(first, x) - C(x, -x)."""

    def gap(x: float) -> float:
        return _pair_capacity(first, x) - _pair_capacity(x, -x)

    low, high = gap(0.0), gap(1.0)
    if low == 0.0:
        return 0.0
    if low * high > 0:
        raise NoRoot(f'C({first}, x) - C(x, -x) keeps sign {low:+.3g} on [0, 1]')
    return float(bisect(gap, 0.0, 1.0, xtol=ROOT_XTOL))


def optimal_family(delta: float) -> FamilyPoint:
    """Equalize the B-side channels (delta/2, x) with the A-side channel (x, -x)."""
    if not 0.0 <= delta <= 2.0:
        raise ValueError(f'delta must lie in [0, 2], got {delta}')
    x_star = _equalize(delta / 2.0)
    return FamilyPoint(x_star=x_star, value=_pair_capacity(x_star, -x_star))


def family_witness(delta: float, x: float) -> CorrelatorVector:
    """x_B^0 = x_B^1 = delta/2 and x_A^1 = -y_A^1 = y_B^0 = y_B^1 = x; every summed constraint
    is tight."""
    return CorrelatorVector(m=2, x_a=[x], y_a=[-x], x_b=[delta / 2.0, delta / 2.0], y_b=[x, x])


def c2_analytic() -> C2Report:
    """Maximal violation: the square of the two free correlators splits into the part where one
    of them is negative (best value C(1, 0)) and the positive quadrant, where C(1, a) = C(a, -a)
    decides."""
    subregion = _pair_capacity(1.0, 0.0)
    alpha = _equalize(1.0)
    quadrant = _pair_capacity(alpha, -alpha)
    residual = abs(_pair_capacity(1.0, alpha) - quadrant)
    return C2Report(
        alpha_star=alpha, c2=min(subregion, quadrant), subregion_value=subregion, residual=residual
    )
