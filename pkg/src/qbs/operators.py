"""Evaluation of the Bernstein-type operator family.

Six kinds are supported: classical Bernstein, classical Kantorovich,
q-Bernstein-Kantorovich, Bernstein-Stancu with shifted knots, its
Kantorovich variant, and the Kantorovich-type q-Bernstein-Stancu operator

    K(f; x) = sum_k p_k(x) int_0^1 f(([k] + q^k t + alpha1) / ([n+1] + beta1)) d_q t

with p_k the shifted-knot weights of :mod:`qbs.stancu_basis`.

Every operator is a weighted sum of per-node functionals of f. The node
functionals do not depend on x, so :func:`apply` computes them once and
evaluates a whole batch of x with one matrix product.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .qcalc import DEFAULT_TOL, JacksonTolerance, QValue, jackson_unit_rows, q_integer
from .stancu_basis import (
    StancuDomain,
    StancuParams,
    bernstein_matrix,
    classical_stancu_domain,
    q_bernstein_matrix,
    rescale,
    stancu_domain,
)

GAUSS_POINTS = 16
_GL_X, _GL_W = np.polynomial.legendre.leggauss(GAUSS_POINTS)
GL_NODES = 0.5 * (_GL_X + 1.0)
GL_WEIGHTS = 0.5 * _GL_W


class DomainWarning(UserWarning):
    """An operator was evaluated outside its Stancu interval."""


class Kind(enum.Enum):
    BERNSTEIN = "bernstein"
    KANTOROVICH = "kantorovich"
    Q_BERNSTEIN_KANTOROVICH = "q-bernstein-kantorovich"
    STANCU_SHIFTED = "stancu-shifted"
    KANTOROVICH_STANCU = "kantorovich-stancu"
    Q_KANTOROVICH_STANCU = "q-kantorovich-stancu"

    @property
    def uses_q(self) -> bool:
        return self in (Kind.Q_BERNSTEIN_KANTOROVICH, Kind.Q_KANTOROVICH_STANCU)

    @property
    def uses_params(self) -> bool:
        return self in (Kind.STANCU_SHIFTED, Kind.KANTOROVICH_STANCU, Kind.Q_KANTOROVICH_STANCU)


@dataclass(frozen=True)
class Lipschitz:
    M: float
    alpha: float

    def __post_init__(self):
        if not self.M > 0:
            raise ValueError("Lipschitz constant M must be positive")
        if not 0 < self.alpha <= 1:
            raise ValueError("Lipschitz exponent must lie in (0, 1]")


@dataclass(frozen=True, eq=False)
class TargetFunction:
    """A function on [0, 1] with optional derivative and Lipschitz data.

    ``eval`` should accept numpy arrays; scalar-returning callables are
    broadcast. Construction checks finiteness on a 101-point grid and, when
    Lipschitz data is given, the Lipschitz inequality on the same grid.
    """

    eval: Callable
    d1: Callable | None = None
    d2: Callable | None = None
    lipschitz: Lipschitz | None = None
    name: str = "f"
    approximate_derivatives: bool = False

    def __post_init__(self):
        if isinstance(self.lipschitz, tuple):
            object.__setattr__(self, "lipschitz", Lipschitz(*self.lipschitz))
        grid = np.linspace(0.0, 1.0, 101)
        values = self(grid)
        if not np.all(np.isfinite(values)):
            raise ValueError(f"{self.name} is not finite on [0, 1]")
        if self.lipschitz is not None:
            M, alpha = self.lipschitz.M, self.lipschitz.alpha
            jump = np.abs(values[:, None] - values[None, :])
            allowed = M * np.abs(grid[:, None] - grid[None, :]) ** alpha
            if np.any(jump > allowed * (1 + 1e-12) + 1e-14):
                raise ValueError(f"{self.name} violates its Lip_{M}({alpha}) metadata")

    def __call__(self, t):
        return _broadcast_eval(self.eval, t)

    def derivative(self, t, order: int = 1):
        fn = {1: self.d1, 2: self.d2}.get(order)
        if fn is None:
            raise ValueError(f"{self.name} has no derivative of order {order}")
        return _broadcast_eval(fn, t)


def _broadcast_eval(fn, t):
    t = np.asarray(t, dtype=float)
    out = np.asarray(fn(t), dtype=float)
    if out.shape != t.shape:
        out = np.broadcast_to(out, t.shape).copy()
    return out


def as_target(f) -> TargetFunction:
    return f if isinstance(f, TargetFunction) else TargetFunction(f)


@dataclass(frozen=True)
class OperatorSpec:
    kind: Kind
    n: int
    q: float | None = None
    params: StancuParams | None = None

    def __post_init__(self):
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        if kind.uses_q:
            if self.q is None:
                raise ValueError(f"{kind.value} needs q")
            object.__setattr__(self, "q", QValue(self.q))
        else:
            object.__setattr__(self, "q", None)
        if kind.uses_params:
            if self.params is None:
                raise ValueError(f"{kind.value} needs Stancu parameters")
            if not isinstance(self.params, StancuParams):
                object.__setattr__(self, "params", StancuParams(*self.params))
        else:
            object.__setattr__(self, "params", None)


def q_kantorovich_stancu(n: int, q: float, params: StancuParams | None = None) -> OperatorSpec:
    return OperatorSpec(Kind.Q_KANTOROVICH_STANCU, n, q, params or StancuParams())


def operator_domain(spec: OperatorSpec) -> StancuDomain:
    """Interval on which the operator is defined as an approximation."""
    if spec.kind is Kind.Q_KANTOROVICH_STANCU:
        return stancu_domain(spec.n, spec.q, spec.params)
    if spec.kind in (Kind.STANCU_SHIFTED, Kind.KANTOROVICH_STANCU):
        return classical_stancu_domain(spec.n, spec.params)
    return StancuDomain(0.0, 1.0)


def basis_matrix(spec: OperatorSpec, x) -> np.ndarray:
    """Weights of the operator at each x; shape (len(x), n + 1)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    n = spec.n
    if spec.kind in (Kind.BERNSTEIN, Kind.KANTOROVICH):
        return bernstein_matrix(n, x)
    if spec.kind is Kind.Q_BERNSTEIN_KANTOROVICH:
        return q_bernstein_matrix(n, spec.q, x)
    u = rescale(x, operator_domain(spec))
    if spec.kind is Kind.Q_KANTOROVICH_STANCU:
        return q_bernstein_matrix(n, spec.q, u)
    return bernstein_matrix(n, u)


@dataclass(frozen=True)
class NodeInterval:
    """Range of arguments at which f is probed for basis index k.
    Point-evaluation operators have lo == hi."""

    k: int
    lo: float
    hi: float


def _node_affine(spec: OperatorSpec):
    """(start, length) per k: f is probed at start + length * t, t in [0, 1]."""
    n = spec.n
    k = np.arange(n + 1, dtype=float)
    if spec.kind is Kind.BERNSTEIN:
        return k / n, np.zeros(n + 1)
    if spec.kind is Kind.KANTOROVICH:
        return k / (n + 1), np.full(n + 1, 1.0 / (n + 1))
    if spec.kind is Kind.STANCU_SHIFTED:
        p = spec.params
        return (k + p.alpha1) / (n + p.beta1), np.zeros(n + 1)
    if spec.kind is Kind.KANTOROVICH_STANCU:
        p = spec.params
        denom = n + p.beta1 + 1
        return (k + p.alpha1) / denom, np.full(n + 1, 1.0 / denom)
    q = spec.q
    ints = np.array([q_integer(i, q) for i in range(n + 1)])
    qk = q ** np.arange(n + 1)
    alpha1, beta1 = (0.0, 0.0)
    if spec.kind is Kind.Q_KANTOROVICH_STANCU:
        alpha1, beta1 = spec.params.alpha1, spec.params.beta1
    denom = q_integer(n + 1, q) + beta1
    return (ints + alpha1) / denom, qk / denom


def sample_nodes(spec: OperatorSpec) -> list[NodeInterval]:
    start, length = _node_affine(spec)
    return [NodeInterval(k, float(s), float(s + ell)) for k, (s, ell) in enumerate(zip(start, length))]


def node_functionals(
    spec: OperatorSpec, f, tol: JacksonTolerance = DEFAULT_TOL
) -> np.ndarray:
    """Per-k value the weights multiply: f(node), or the inner integral."""
    f = as_target(f)
    start, length = _node_affine(spec)
    if spec.kind in (Kind.BERNSTEIN, Kind.STANCU_SHIFTED):
        return f(start)
    if spec.kind in (Kind.KANTOROVICH, Kind.KANTOROVICH_STANCU):
        return f(start[:, None] + length[:, None] * GL_NODES[None, :]) @ GL_WEIGHTS
    return jackson_unit_rows(f, start, length, spec.q, tol)


def apply(spec: OperatorSpec, f, x, tol: JacksonTolerance = DEFAULT_TOL):
    """Evaluate the operator on f at x (scalar or array).

    Non-Stancu kinds require x in [0, 1]. Stancu kinds accept any x but emit
    a :class:`DomainWarning` for points outside the Stancu interval.
    """
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    dom = operator_domain(spec)
    inside = dom.contains(xs)
    if not np.all(inside):
        if not spec.kind.uses_params:
            raise ValueError(f"{spec.kind.value} is defined for x in [0, 1] only")
        warnings.warn(
            f"{spec.kind.value}: {int(np.sum(~inside))} point(s) outside [{dom.a:.6g}, {dom.b:.6g}]",
            DomainWarning,
            stacklevel=2,
        )
    values = basis_matrix(spec, xs) @ node_functionals(spec, f, tol)
    return float(values[0]) if scalar else values


def endpoint_value(spec: OperatorSpec, f, tol: JacksonTolerance = DEFAULT_TOL) -> float:
    """Value at the left end of the domain, where only the k = 0 term survives."""
    return float(node_functionals(spec, f, tol)[0])

