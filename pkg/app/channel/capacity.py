from __future__ import annotations

import math
from typing import Tuple

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import entr, expit, logit, rel_entr

from app.schemas.core import BinaryChannel

CAPACITY_EPS = 1e-12
GRADIENT_MARGIN = 1e-12
LN2 = math.log(2.0)


class EntropyDomainError(ValueError):
    pass


class NoConvergence(RuntimeError):
    """An iterative method ran out of budget; ``best`` is the best value it reached."""

    def __init__(self, message: str, best: float | None = None, iterations: int = 0) -> None:
        super().__init__(message)
        self.best = best
        self.iterations = iterations


def binary_entropy(p: ArrayLike) -> np.ndarray | float:
    arr = np.asarray(p, dtype=float)
    if np.any((arr < 0.0) | (arr > 1.0)) or np.any(np.isnan(arr)):
        raise EntropyDomainError(f'binary entropy needs p in [0, 1], got {p}')
    value = (entr(arr) + entr(1.0 - arr)) / LN2
    return float(value) if value.ndim == 0 else value


def _binary_kl(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (rel_entr(a, b) + rel_entr(1.0 - a, 1.0 - b)) / LN2


def _optimal_input(p: np.ndarray, q: np.ndarray, eps: float) -> Tuple[np.ndarray, np.ndarray]:
    """Probability of input 0 at the optimum, and the mask of degenerate (p = q) channels.

    The output distribution at the optimum satisfies H'(r) = (H(p) - H(q)) / (p - q), so
    r = 1 / (1 + 2**s) and the input weight follows from r = pi*p + (1-pi)*q.
    """
    same = np.abs(p - q) <= eps
    gap = np.where(same, 1.0, p - q)
    slope = (binary_entropy(p) - binary_entropy(q)) / gap
    r = expit(-slope * LN2)
    pi = np.clip((r - q) / gap, 0.0, 1.0)
    return np.where(same, 0.5, pi), same


def capacity_array(p: ArrayLike, q: ArrayLike, eps: float = CAPACITY_EPS) -> np.ndarray:
    """Vectorized capacity of binary channels with P(Y=+1|X=0)=p and P(Y=+1|X=1)=q, in bits.

    Equal to the closed form [pH(q) - qH(p)]/(q-p) + log2(1 + 2**((H(p)-H(q))/(q-p))) but
    evaluated as the mutual information at the optimal input, which stays finite at p, q in {0, 1}.
    """
    p, q = np.broadcast_arrays(np.asarray(p, dtype=float), np.asarray(q, dtype=float))
    pi, same = _optimal_input(p, q, eps)
    r = pi * p + (1.0 - pi) * q
    with np.errstate(invalid='ignore'):
        info = np.where(pi > 0, pi * _binary_kl(p, r), 0.0)
        info = info + np.where(pi < 1, (1.0 - pi) * _binary_kl(q, r), 0.0)
    return np.where(same, 0.0, np.clip(info, 0.0, 1.0))


def capacity(ch: BinaryChannel, eps: float = CAPACITY_EPS) -> float:
    return float(capacity_array(ch.p, ch.q, eps))


def capacity_closed_form(p: float, q: float, eps: float = CAPACITY_EPS) -> float:
    """Literal closed-form expression; loses precision near the edges of the square."""
    if abs(p - q) <= eps:
        return 0.0
    hp, hq = binary_entropy(p), binary_entropy(q)
    return (p * hq - q * hp) / (q - p) + math.log2(1.0 + 2.0 ** ((hp - hq) / (q - p)))


def optimal_input(ch: BinaryChannel, eps: float = CAPACITY_EPS) -> float:
    pi, _ = _optimal_input(np.asarray(ch.p, dtype=float), np.asarray(ch.q, dtype=float), eps)
    return float(pi)


def capacity_gradient(
    p: ArrayLike, q: ArrayLike, eps: float = CAPACITY_EPS
) -> Tuple[np.ndarray, np.ndarray]:
    """Partial derivatives of the capacity in p and q.

    By the envelope theorem dC/dp = pi (H'(r) - H'(p)) and dC/dq = (1 - pi)(H'(r) - H'(q)), with
    H'(u) = log2((1-u)/u). Inputs are pulled into the open square; the gradient is 0 where p = q.
    """
    p = np.clip(np.asarray(p, dtype=float), GRADIENT_MARGIN, 1.0 - GRADIENT_MARGIN)
    q = np.clip(np.asarray(q, dtype=float), GRADIENT_MARGIN, 1.0 - GRADIENT_MARGIN)
    p, q = np.broadcast_arrays(p, q)
    pi, same = _optimal_input(p, q, eps)
    r = np.clip(pi * p + (1.0 - pi) * q, GRADIENT_MARGIN, 1.0 - GRADIENT_MARGIN)
    h_r = -logit(r) / LN2
    grad_p = pi * (h_r + logit(p) / LN2)
    grad_q = (1.0 - pi) * (h_r + logit(q) / LN2)
    return np.where(same, 0.0, grad_p), np.where(same, 0.0, grad_q)


def capacity_oracle(ch: BinaryChannel, iters: int = 100_000, tol: float = 1e-9) -> float:
    """Blahut-Arimoto alternating maximization, stopped on the upper/lower bound gap."""
    transition = np.array([[ch.p, 1.0 - ch.p], [ch.q, 1.0 - ch.q]], dtype=float)
    weights = np.array([0.5, 0.5])
    lower = 0.0
    for _ in range(iters):
        output = weights @ transition
        divergence = rel_entr(transition, output).sum(axis=1) / LN2
        lower = float(weights @ divergence)
        upper = float(divergence.max())
        if upper - lower <= tol:
            return max(lower, 0.0)
        weights = weights * np.exp2(divergence)
        weights /= weights.sum()
    raise NoConvergence(
        f'Blahut-Arimoto did not reach gap {tol} in {iters} iterations',
        best=lower,
        iterations=iters,
    )


def correlator_capacity(x: ArrayLike, y: ArrayLike, eps: float = CAPACITY_EPS) -> np.ndarray:
    """Capacity of the channel induced by a correlator pair, p = (1+x)/2 and q = (1+y)/2."""
    p = np.clip((1.0 + np.asarray(x, dtype=float)) / 2.0, 0.0, 1.0)
    q = np.clip((1.0 + np.asarray(y, dtype=float)) / 2.0, 0.0, 1.0)
    return capacity_array(p, q, eps)
