from __future__ import annotations

from typing import Optional

from app.box import TripartiteBox, chained_signs, check_scenario
from app.schemas.core import MonogamyReport

VIOLATION_TOL = 1e-9
CONSISTENCY_TOL = 1e-9


class StrictModeInapplicable(ValueError):
    def __init__(self, discrepancy: float) -> None:
        super().__init__(
            f'<B0E> conditioned on A0 and A1 differ by {discrepancy:.3g}; use relaxed mode'
        )
        self.discrepancy = discrepancy


def bell_value(box: TripartiteBox, m: Optional[int] = None) -> float:
    """Chained Bell expression of A and B; CHSH for two settings.

    <A_iB_j> is read conditioned on E's single setting, so signaling boxes are handled too.
    """
    m = check_scenario(box, m)
    return float((chained_signs(m) * box.two_body().ab).sum())


def monogamy_lhs(
    box: TripartiteBox,
    m: Optional[int] = None,
    relaxed: bool = False,
    tol: float = VIOLATION_TOL,
    consistency_tol: float = CONSISTENCY_TOL,
) -> MonogamyReport:
    """Strict: |I| + 2|<B0E>|. Relaxed: |I| + |<B0E>_{A0} + <B0E>_{A1}|. Bound 2M in both."""
    m = check_scenario(box, m)
    be = box.two_body().be
    bell = bell_value(box, m)
    if relaxed:
        lhs = abs(bell) + abs(float(be[0, 0] + be[1, 0]))
    else:
        discrepancy = abs(float(be[0, 0] - be[1, 0]))
        if discrepancy > consistency_tol:
            raise StrictModeInapplicable(discrepancy)
        lhs = abs(bell) + 2.0 * abs(float(be[0, 0]))
    bound = 2.0 * m
    return MonogamyReport(lhs=lhs, bound=bound, delta=lhs - bound, relaxed=relaxed, tolerance=tol)
