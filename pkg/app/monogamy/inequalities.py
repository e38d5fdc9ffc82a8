from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement, product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from app.box import SIGNS, CorrelatorKey, TripartiteBox, chained_signs, correlator_keys
from app.schemas.core import correlator_labels

Signs = Tuple[int, int, int]

# (s1, s2, s3) on (<A_iB_j>_E, <B_jE>_{A_i}, <A_iE>_{B_j}) with s1 * s2 * s3 = -1
SIGN_PATTERNS: Tuple[Signs, ...] = ((1, 1, -1), (1, -1, 1), (-1, 1, 1), (-1, -1, -1))
TRIPLE_TOL = 1e-12


@dataclass(frozen=True, order=True)
class TripleInequality:
    """s1 <A_iB_j>_E + s2 <B_jE>_{A_i} + s3 <A_iE>_{B_j} <= 1 for one setting pair (i, j)."""

    setting_pair: Tuple[int, int]
    signs: Signs

    def __post_init__(self) -> None:
        if any(s not in (1, -1) for s in self.signs) or len(self.signs) != 3:
            raise ValueError(f'signs must be three values in {{-1, +1}}, got {self.signs}')
        if self.signs[0] * self.signs[1] * self.signs[2] != -1:
            raise ValueError(f'sign product must be -1, got signs {self.signs}')

    def swapped(self) -> 'TripleInequality':
        s1, s2, s3 = self.signs
        return TripleInequality(self.setting_pair, (s1, -s2, -s3))

    def value(self, box: TripartiteBox) -> float:
        i, j = self.setting_pair
        tb = box.two_body()
        s1, s2, s3 = self.signs
        return float(s1 * tb.ab[i, j] + s2 * tb.be[i, j] + s3 * tb.ae[i, j])


def triple_value(dist: np.ndarray, signs: Signs) -> float:
    """Signed sum of the three pairwise correlators of a distribution over {+1, -1}^3."""
    table = np.asarray(dist, dtype=float).reshape(2, 2, 2)
    ab = np.einsum('abe,a,b->', table, SIGNS, SIGNS)
    be = np.einsum('abe,b,e->', table, SIGNS, SIGNS)
    ae = np.einsum('abe,a,e->', table, SIGNS, SIGNS)
    s1, s2, s3 = signs
    return float(s1 * ab + s2 * be + s3 * ae)


def triple_inequality_holds(dist: np.ndarray, signs: Signs, tol: float = TRIPLE_TOL) -> bool:
    return triple_value(dist, signs) <= 1.0 + tol


@dataclass(frozen=True)
class SwapChoice:
    """Which members of the base set have their E terms swapped.

    ``a[i-1]`` swaps the member on (A_i, B_i), ``b[i-1]`` the one on (A_{i+1}, B_i) for
    i <= M-2, ``c`` the one on (A_M, B_{M-1}). ``heads`` swaps the two members that carry
    <B_0E>; only the relaxed family may do that.
    """

    a: Tuple[int, ...] = ()
    b: Tuple[int, ...] = ()
    c: int = 0
    heads: Tuple[int, int] = (0, 0)

    def validate(self, m: int, relaxed: bool) -> None:
        if len(self.a) != m - 1 or len(self.b) != m - 2:
            raise ValueError(f'm={m} needs {m - 1} a-bits and {m - 2} b-bits')
        if any(bit not in (0, 1) for bit in (*self.a, *self.b, self.c, *self.heads)):
            raise ValueError('swap bits must be 0 or 1')
        if any(self.heads) and not relaxed:
            raise ValueError('head members can only be swapped in the relaxed family')


def all_swap_choices(m: int, relaxed: bool = False) -> Iterator[SwapChoice]:
    head_options = list(product((0, 1), repeat=2)) if relaxed else [(0, 0)]
    for heads in head_options:
        for bits in product((0, 1), repeat=2 * m - 2):
            yield SwapChoice(
                a=tuple(bits[: m - 1]),
                b=tuple(bits[m - 1 : 2 * m - 3]),
                c=bits[-1],
                heads=heads,  # type: ignore[arg-type]
            )


@dataclass(frozen=True)
class InequalitySet:
    """2M triple inequalities and the correlator constraint their sum implies.

    ``summed`` maps correlator labels to integer coefficients d with d . c >= delta for every
    box whose monogamy functional exceeds 2M by delta.
    """

    m: int
    members: Tuple[TripleInequality, ...]
    summed: Dict[str, int]
    choice: SwapChoice = field(default_factory=SwapChoice)
    relaxed: bool = False

    @property
    def labels(self) -> Tuple[str, ...]:
        return correlator_labels(self.m, self.relaxed)

    def coefficients(self) -> np.ndarray:
        return np.array([self.summed.get(label, 0) for label in self.labels], dtype=float)

    def members_value(self, box: TripartiteBox) -> float:
        return sum(member.value(box) for member in self.members)


def base_members(m: int) -> List[TripleInequality]:
    """Members in order: the two heads on B_0, then (A_i, B_i) and (A_{i+1}, B_i) for i >= 1.

    A_M = -A_0: the wrapped member keeps A_0 as conditioning but negates <A_0B_{M-1}> and
    <A_0E>.
    """
    members = [TripleInequality((0, 0), (1, 1, -1)), TripleInequality((1, 0), (1, 1, -1))]
    for i in range(1, m):
        members.append(TripleInequality((i, i), (1, -1, 1)))
        if i + 1 < m:
            members.append(TripleInequality((i + 1, i), (1, 1, -1)))
        else:
            members.append(TripleInequality((0, i), (-1, 1, 1)))
    return members


def generate_inequality_set(
    m: int, choice: Optional[SwapChoice] = None, relaxed: bool = False
) -> InequalitySet:
    if choice is None:
        choice = SwapChoice(a=(0,) * (m - 1), b=(0,) * (m - 2), c=0)
    choice.validate(m, relaxed)
    members = base_members(m)
    swaps = [choice.heads[0], choice.heads[1]]
    for i in range(1, m):
        swaps.append(choice.a[i - 1])
        swaps.append(choice.b[i - 1] if i + 1 < m else choice.c)
    members = [member.swapped() if bit else member for member, bit in zip(members, swaps)]

    # summed = <B0E>_{A0} + <B0E>_{A1} minus the E terms of the members
    totals: Dict[CorrelatorKey, int] = defaultdict(int)
    totals[('BE', 0, 0)] += 1
    totals[('BE', 1, 0)] += 1
    for member in members:
        i, j = member.setting_pair
        _, s2, s3 = member.signs
        totals[('BE', i, j)] -= s2
        totals[('AE', i, j)] -= s3
    reverse = {key: label for label, key in correlator_keys(m, relaxed).items()}
    summed: Dict[str, int] = {}
    for key, coefficient in totals.items():
        if coefficient == 0:
            continue
        if key not in reverse:
            raise RuntimeError(f'correlator {key} survives the sum but has no coordinate')
        summed[reverse[key]] = coefficient
    ordered = {label: summed[label] for label in correlator_labels(m, relaxed) if label in summed}
    return InequalitySet(
        m=m, members=tuple(members), summed=ordered, choice=choice, relaxed=relaxed
    )


def summed_constraints(m: int, relaxed: bool = False) -> List[InequalitySet]:
    """One set per distinct summed constraint, in swap-choice order."""
    seen = set()
    sets: List[InequalitySet] = []
    for choice in all_swap_choices(m, relaxed):
        ineq_set = generate_inequality_set(m, choice, relaxed)
        key = tuple(sorted(ineq_set.summed.items()))
        if key not in seen:
            seen.add(key)
            sets.append(ineq_set)
    return sets


@lru_cache(maxsize=64)
def _patterns_with_sum(target: int, count: int) -> Tuple[Tuple[Signs, ...], ...]:
    return tuple(
        combo
        for combo in combinations_with_replacement(SIGN_PATTERNS, count)
        if sum(signs[0] for signs in combo) == target
    )


def _identifies_to_monogamy(chosen: Sequence[TripleInequality], m: int) -> bool:
    """After identifying <A_iE>_{B_j} with <A_iE> and <B_jE>_{A_i} with <B_jE>, the E terms
    must reduce to 2<B_0E>."""
    ae = np.zeros(m, dtype=int)
    be = np.zeros(m, dtype=int)
    for ineq in chosen:
        i, j = ineq.setting_pair
        be[j] += ineq.signs[1]
        ae[i] += ineq.signs[2]
    return not ae.any() and be[0] == 2 and not be[1:].any()


def find_minimal_sets(m: int, size: Optional[int] = None) -> List[Tuple[TripleInequality, ...]]:
    """All multisets of ``size`` (default 2M) triple inequalities summing to I + 2<B_0E> <= 2M.

    Setting pairs are filled one at a time; each pair gets a multiset of sign patterns whose
    <A_iB_j> signs add up to that pair's chained coefficient.
    """
    size = 2 * m if size is None else size
    targets = chained_signs(m).astype(int)
    pairs = [(i, j) for i in range(m) for j in range(m)]
    minimum = [abs(int(targets[i, j])) for i, j in pairs]
    still_needed = [sum(minimum[k:]) for k in range(len(pairs) + 1)]
    found: List[Tuple[TripleInequality, ...]] = []

    def extend(k: int, budget: int, chosen: List[TripleInequality]) -> None:
        if k == len(pairs):
            if budget == 0 and _identifies_to_monogamy(chosen, m):
                found.append(tuple(sorted(chosen)))
            return
        i, j = pairs[k]
        for count in range(minimum[k], budget - still_needed[k + 1] + 1):
            for combo in _patterns_with_sum(int(targets[i, j]), count):
                extend(k + 1, budget - count, chosen + [TripleInequality((i, j), s) for s in combo])

    extend(0, size, [])
    return found


def verify_minimal_set(m: int, size: Optional[int] = None) -> int:
    if not 2 <= m <= 4:
        raise ValueError(f'exhaustive search is limited to 2 <= m <= 4, got {m}')
    return len(find_minimal_sets(m, size))
