from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Literal, Optional, Sequence

import numpy as np

from app.box.tables import TripartiteBox, from_correlators, make_box
from app.schemas.core import BellScenario

BoxKind = Literal['pr_times_coin', 'local_deterministic', 'random_nonsignaling', 'random']


def pr_signs(m: int) -> np.ndarray:
    """PR correlations <A_iB_j> = +1 except <A_0B_{M-1}> = -1; the chained value is 2M."""
    signs = np.ones((m, m))
    signs[0, m - 1] = -1.0
    return signs


def pr_times_coin(m: int = 2) -> TripartiteBox:
    scenario = BellScenario(m=m)
    zeros = np.zeros((m, m))
    return from_correlators(scenario, pr_signs(m), zeros, zeros)


def local_deterministic(
    m: int = 2,
    a_signs: Optional[Sequence[int]] = None,
    b_signs: Optional[Sequence[int]] = None,
    e_sign: int = 1,
) -> TripartiteBox:
    """Every observable has a fixed outcome; defaults to all +1."""
    a_signs = list(a_signs) if a_signs is not None else [1] * m
    b_signs = list(b_signs) if b_signs is not None else [1] * m
    if len(a_signs) != m or len(b_signs) != m:
        raise ValueError(f'need {m} signs for A and for B')
    if any(s not in (1, -1) for s in [*a_signs, *b_signs, e_sign]):
        raise ValueError('deterministic outcomes must be +1 or -1')
    table = np.zeros((m, m, 2, 2, 2))
    e_bit = 0 if e_sign == 1 else 1
    for i, j in product(range(m), repeat=2):
        table[i, j, 0 if a_signs[i] == 1 else 1, 0 if b_signs[j] == 1 else 1, e_bit] = 1.0
    return make_box(BellScenario(m=m), table)


@lru_cache(maxsize=8)
def _nonsignaling_extremes(m: int) -> np.ndarray:
    """Local deterministic boxes and sign-relabelled PR boxes with an unbiased E."""
    boxes = []
    for a_signs in product((1, -1), repeat=m):
        for b_signs in product((1, -1), repeat=m):
            for e_sign in (1, -1):
                boxes.append(local_deterministic(m, a_signs, b_signs, e_sign).table)
    scenario = BellScenario(m=m)
    zeros = np.zeros((m, m))
    base = pr_signs(m)
    # (sigma, tau) and (-sigma, -tau) give the same box
    for flips in product((1, -1), repeat=2 * m - 1):
        sigma = np.array((1, *flips[: m - 1]), dtype=float)
        tau = np.array(flips[m - 1 :], dtype=float)
        ab = sigma[:, None] * tau[None, :] * base
        boxes.append(from_correlators(scenario, ab, zeros, zeros).table)
    stack = np.stack(boxes)
    stack.setflags(write=False)
    return stack


def random_nonsignaling(m: int = 2, seed: int = 7, concentration: float = 1.0) -> TripartiteBox:
    """Dirichlet-weighted mixture of nonsignaling extreme boxes; nonsignaling by convexity."""
    rng = np.random.default_rng(seed)
    stack = _nonsignaling_extremes(m)
    weights = rng.dirichlet(np.full(len(stack), concentration))
    return make_box(BellScenario(m=m), np.tensordot(weights, stack, axes=1))


def random_box(m: int = 2, seed: int = 7) -> TripartiteBox:
    """Independent Dirichlet distribution per setting pair; generally signaling."""
    rng = np.random.default_rng(seed)
    table = rng.dirichlet(np.ones(8), size=(m, m)).reshape(m, m, 2, 2, 2)
    return make_box(BellScenario(m=m), table)


def reference_box(delta: float, x: float) -> TripartiteBox:
    """Two-setting box with PR correlations between A and B that violates monogamy by ``delta``.

    <A_iE>_{B_0} = delta/2 and <A_iE>_{B_1} = x for both i; <B_jE>_{A_i} = <A_iB_j><A_iE>_{B_j}
    keeps every entry inside the PR support nonnegative.
    """
    if not 0.0 <= delta <= 2.0:
        raise ValueError(f'delta must lie in [0, 2], got {delta}')
    ab = pr_signs(2)
    ae = np.array([[delta / 2.0, x], [delta / 2.0, x]])
    return from_correlators(BellScenario(m=2), ab, ae, ab * ae)


def canonical_boxes(
    kind: BoxKind,
    m: int = 2,
    assignment: Optional[Sequence[int]] = None,
    seed: int = 7,
) -> TripartiteBox:
    """Named box constructors.

    ``assignment`` lists the A signs, then the B signs, then the E sign.
    """
    if kind == 'pr_times_coin':
        return pr_times_coin(m)
    if kind == 'local_deterministic':
        if assignment is None:
            return local_deterministic(m)
        signs = list(assignment)
        if len(signs) != 2 * m + 1:
            raise ValueError(f'assignment needs {2 * m + 1} signs, got {len(signs)}')
        return local_deterministic(m, signs[:m], signs[m : 2 * m], signs[2 * m])
    if kind == 'random_nonsignaling':
        return random_nonsignaling(m, seed)
    if kind == 'random':
        return random_box(m, seed)
    raise ValueError(f'unknown box kind {kind!r}')
