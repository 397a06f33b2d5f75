"""Shifted-knot domain and basis weights for the Stancu-type operators.

The shifted weights are the q-Bernstein basis in the rescaled variable
u = (x - a) / (b - a), where [a, b] is the contracted Stancu interval. With
that reading the weights sum to one for every x, reduce to the plain
q-Bernstein basis when alpha2 = beta2 = 0, and tend to the classical
shifted-knot weights ((n + beta2) / n)^n C(n, r) (x - a)^r (b - x)^(n - r)
as q -> 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qcalc import QValue, q_binomial_row, q_integer


@dataclass(frozen=True)
class StancuParams:
    alpha1: float = 0.0
    alpha2: float = 0.0
    beta1: float = 0.0
    beta2: float = 0.0

    def __post_init__(self):
        a1, a2, b1, b2 = self.as_tuple()
        if not all(math.isfinite(v) for v in (a1, a2, b1, b2)):
            raise ValueError("Stancu parameters must be finite")
        if not (0.0 <= a1 <= a2 <= b1 <= b2):
            raise ValueError(
                "Stancu parameters must satisfy 0 <= alpha1 <= alpha2 <= beta1 <= beta2, "
                f"got alpha1={a1}, alpha2={a2}, beta1={b1}, beta2={b2}"
            )

    def as_tuple(self):
        return (self.alpha1, self.alpha2, self.beta1, self.beta2)

    @property
    def is_zero(self) -> bool:
        return self.as_tuple() == (0.0, 0.0, 0.0, 0.0)


ZERO_PARAMS = StancuParams()


@dataclass(frozen=True)
class StancuDomain:
    a: float
    b: float

    @property
    def width(self) -> float:
        return self.b - self.a

    def contains(self, x, slack: float = 1e-13):
        x = np.asarray(x, dtype=float)
        return (x >= self.a - slack) & (x <= self.b + slack)

    def grid(self, points: int) -> np.ndarray:
        return np.linspace(self.a, self.b, points)


@dataclass(frozen=True)
class BasisWeights:
    """Weights p_k, k = 0..n, for one evaluation point (``weights`` is 1-D)
    or a batch of points (``weights`` has shape (len(x), n + 1))."""

    n: int
    weights: np.ndarray
    in_domain: np.ndarray | bool = True

    @property
    def total(self):
        return self.weights.sum(axis=-1)


def domain_from_integer(nq: float, params: StancuParams) -> StancuDomain:
    """Stancu interval built from an already evaluated [n] (or n at q = 1)."""
    denom = nq + params.beta2
    return StancuDomain(params.alpha2 / denom, (nq + params.alpha2) / denom)


def stancu_domain(n: int, q: float, params: StancuParams) -> StancuDomain:
    if n < 1:
        raise ValueError("n must be at least 1")
    return domain_from_integer(q_integer(n, q), params)


def classical_stancu_domain(n: int, params: StancuParams) -> StancuDomain:
    if n < 1:
        raise ValueError("n must be at least 1")
    return domain_from_integer(float(n), params)


def rescale(x, dom: StancuDomain):
    """Affine map [a, b] -> [0, 1]."""
    if isinstance(x, (list, tuple)):
        x = np.asarray(x, dtype=float)
    return (x - dom.a) / dom.width


def unscale(u, dom: StancuDomain):
    if isinstance(u, (list, tuple)):
        u = np.asarray(u, dtype=float)
    return dom.a + u * dom.width


def q_bernstein_matrix(n: int, q: float, u) -> np.ndarray:
    """q-Bernstein weights [n k]_q u^k (1 - u)_q^(n-k); one row per u."""
    q = QValue(q)
    u = np.atleast_1d(np.asarray(u, dtype=float))
    binom = q_binomial_row(n, q)
    # tail[:, m] = (1 - u)_q^m for m = 0..n
    tail = np.ones((u.size, n + 1))
    qs = 1.0
    for m in range(1, n + 1):
        tail[:, m] = tail[:, m - 1] * (1.0 - qs * u)
        qs *= q
    powers = u[:, None] ** np.arange(n + 1)[None, :]
    return binom[None, :] * powers * tail[:, ::-1]


def bernstein_matrix(n: int, u) -> np.ndarray:
    """Classical Bernstein weights C(n, k) u^k (1 - u)^(n-k); one row per u."""
    u = np.atleast_1d(np.asarray(u, dtype=float))
    k = np.arange(n + 1)
    binom = np.array([math.comb(n, i) for i in k], dtype=float)
    return binom[None, :] * u[:, None] ** k[None, :] * (1.0 - u[:, None]) ** (n - k)[None, :]


def q_bernstein_weights(n: int, q: float, u: float) -> BasisWeights:
    if n < 1:
        raise ValueError("n must be at least 1")
    return BasisWeights(n, q_bernstein_matrix(n, q, u)[0])


def stancu_weights(n: int, q: float, params: StancuParams, x) -> BasisWeights:
    """Shifted-knot q-Bernstein weights at x (scalar or array).

    Points outside the Stancu interval are still evaluated; ``in_domain``
    marks which ones were inside.
    """
    dom = stancu_domain(n, q, params)
    u = rescale(x, dom)
    mat = q_bernstein_matrix(n, q, u)
    inside = dom.contains(x)
    if np.ndim(x) == 0:
        return BasisWeights(n, mat[0], bool(inside))
    return BasisWeights(n, mat, inside)
