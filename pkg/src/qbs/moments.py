"""Closed-form moments of the Kantorovich q-Bernstein-Stancu operator and
the quantities derived from them.

Notation: N = [n]_q, D = [n+1]_q + beta1, a = alpha2 / (N + beta2) is the
left end of the Stancu interval, R = (N + beta2) / D.

The second moment carries the factor (x - a)^2 as an ordinary square. The
alternative q-shifted product (x - a)(x - q a) is kept only as a diagnostic
(:func:`moment2_q_shifted_reading`); it does not match the operator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .operators import OperatorSpec, q_kantorovich_stancu
from .qcalc import QValue, q_integer
from .stancu_basis import StancuParams


def _ints(n, q, params):
    N = q_integer(n, q)
    D = q_integer(n + 1, q) + params.beta1
    a = params.alpha2 / (N + params.beta2)
    return N, D, a


def _first_moment_slope(n, q, params):
    """Coefficient of (x - a) in K(t; x)."""
    N, D, _ = _ints(n, q, params)
    return (N + params.beta2) / D * (2 * q / q_integer(2, q))


def _first_moment_offset(n, q, params):
    _, D, _ = _ints(n, q, params)
    return (params.alpha1 + 1 / q_integer(2, q)) / D


def _m2_quadratic_coeff(n, q, params):
    """Coefficient of (x - a)^2 in K(t^2; x)."""
    N, D, _ = _ints(n, q, params)
    A = 1 + (q - 1) ** 2 / q_integer(3, q) + 2 * (q - 1) / q_integer(2, q)
    return q * q_integer(n - 1, q) / N * A * ((N + params.beta2) / D) ** 2


def _m2_linear_coeff(n, q, params):
    """Coefficient of (x - a) in K(t^2; x)."""
    N, D, _ = _ints(n, q, params)
    AB = 1 + (q * q - 1) / q_integer(3, q) + (2 * params.alpha1 + 1) * 2 * q / q_integer(2, q)
    return AB * (N + params.beta2) / D**2


def _m2_constant(n, q, params):
    _, D, _ = _ints(n, q, params)
    a1 = params.alpha1
    return (a1 * a1 + 2 * a1 / q_integer(2, q) + 1 / q_integer(3, q)) / D**2


def _check_n(n):
    if n < 1:
        raise ValueError("n must be at least 1")


def moment1_closed(n: int, q: float, params: StancuParams, x):
    """K(t; x)."""
    _check_n(n)
    q = QValue(q)
    _, _, a = _ints(n, q, params)
    return _first_moment_slope(n, q, params) * (np.asarray(x) - a) + _first_moment_offset(n, q, params)


def moment2_closed(n: int, q: float, params: StancuParams, x):
    """K(t^2; x)."""
    _check_n(n)
    q = QValue(q)
    _, _, a = _ints(n, q, params)
    s = np.asarray(x) - a
    return (
        _m2_quadratic_coeff(n, q, params) * s * s
        + _m2_linear_coeff(n, q, params) * s
        + _m2_constant(n, q, params)
    )


def moment2_q_shifted_reading(n: int, q: float, params: StancuParams, x):
    """K(t^2; x) with (x - a)_q^2 read as (x - a)(x - q a). Diagnostic only."""
    _check_n(n)
    q = QValue(q)
    _, _, a = _ints(n, q, params)
    x = np.asarray(x)
    s = x - a
    return (
        _m2_quadratic_coeff(n, q, params) * s * (x - q * a)
        + _m2_linear_coeff(n, q, params) * s
        + _m2_constant(n, q, params)
    )


def central2_exact(n: int, q: float, params: StancuParams, x):
    """K((t - x)^2; x) from the closed forms (K(1; x) = 1)."""
    x = np.asarray(x)
    return moment2_closed(n, q, params, x) - 2 * x * moment1_closed(n, q, params, x) + x * x


def central2_bound(n: int, q: float, params: StancuParams) -> float:
    """Right-hand side of the stated central-moment inequality, kept term
    for term. It is not guaranteed to dominate :func:`central2_exact`;
    callers check that numerically."""
    _check_n(n)
    q = QValue(q)
    a1, a2, _, b2 = params.as_tuple()
    N, D, _ = _ints(n, q, params)
    q2, q3 = q_integer(2, q), q_integer(3, q)
    return (
        2 * q * q * (2 * q + 1) / (q2 * q3) * N * (N + a2) / D**2
        + q / (1 + q) * ((3 + 5 * q + 4 * q * q) / (1 + q + q * q) + 4 * a1) * N / D**2
        - 2 / (1 + q) * (2 * q * N + 2 * a1 + 1) * (N + a2) / (D * (N + b2))
        + ((N + a2) / (N + b2)) ** 2
        + ((1 + a1) / D) ** 2
    )


class NegativeDeltaError(ArithmeticError):
    """The delta_n^2 expression is negative for these inputs."""


def delta_n(n: int, q: float, params: StancuParams) -> float:
    value = central2_bound(n, q, params)
    if value < 0:
        raise NegativeDeltaError(
            f"delta_n^2 = {value:.6g} < 0 at n={n}, q={q}, params={params.as_tuple()}"
        )
    return math.sqrt(value)


def local_shift_coeffs(n: int, q: float, params: StancuParams) -> tuple[float, float]:
    """(a_n, b_n) with K(t; x) = a_n x + b_n."""
    _check_n(n)
    q = QValue(q)
    N, D, _ = _ints(n, q, params)
    a_n = 2 * q / (1 + q) * (N + params.beta2) / D
    b_n = (params.alpha1 + 1 / (1 + q)) / D - 2 * q / (1 + q) * params.alpha2 / D
    return a_n, b_n


def delta_n_x(n: int, q: float, params: StancuParams, x):
    """Quadratic-in-x local majorant used by the local approximation bound."""
    _check_n(n)
    q = QValue(q)
    a1, a2, _, b2 = params.as_tuple()
    N, D, _ = _ints(n, q, params)
    R = (N + b2) / D
    s3 = 1 + q + q * q
    x = np.asarray(x)
    quad = (1 + 2 * q + 4 * q**2 + 5 * q**3) / (1 + 2 * q + 2 * q**2 + q**3) * R**2 - 2 * (3 * q + 1) / (1 + q) * R + 2
    lin = ((5 + 7 * q + 6 * q * q) / s3 + 2 * q * q * (2 * q + 1) * a2 / (s3 * N) + 4 * a1) * (N + b2) / D**2 + 2 * a2 / D
    const = (
        q * q * (2 * q + 1) / s3 * (a2 / D) ** 2
        - q / (1 + q) * ((3 + 5 * q + 4 * q * q) / s3 + 4 * a1) * a2 / D**2
        + 2 * ((1 + a1) / D) ** 2
    )
    return quad * x * x + lin * x + const


def scaled_limits(x, a: float, params: StancuParams):
    """Limits of [n] K(t - x; x) and [n] K((t - x)^2; x) when q_n^n -> a."""
    if not 0 <= a < 1:
        raise ValueError("a must lie in [0, 1)")
    a1, a2, b1, b2 = params.as_tuple()
    x = np.asarray(x)
    L1 = -(1 + a + 2 * (b1 - b2)) * x / 2 + (1 + 2 * (a1 - a2)) / 2
    L2 = (a + 2 * b1 - 2 * b2) * x * x + x
    return L1, L2


def derived_variance_limit(x):
    """Limit of [n] K((t - x)^2; x) obtained from the closed forms: x(1 - x)
    for every a and every shift. Differs from the second value returned by
    :func:`scaled_limits`."""
    x = np.asarray(x)
    return x * (1 - x)


@dataclass(frozen=True)
class QSequence:
    """A rule n -> q_n.

    kinds: ``one-minus-c/n`` (q_n = 1 - c/n, q_n^n -> e^-c),
    ``nthroot`` (q_n = a^(1/n), q_n^n = a), ``one-minus-c/sqrt-n``
    (q_n = 1 - c/sqrt(n), q_n^n -> 0) and ``fixed``.
    """

    kind: str
    value: float

    KINDS = ("one-minus-c/n", "nthroot", "one-minus-c/sqrt-n", "fixed")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown q-sequence kind {self.kind!r}")
        v = self.value
        if self.kind == "nthroot" and not 0 < v < 1:
            raise ValueError("nthroot needs 0 < a < 1 (a = 0 has no positive n-th root)")
        if self.kind.startswith("one-minus") and not v > 0:
            raise ValueError("c must be positive")
        if self.kind == "fixed":
            QValue(v)

    @classmethod
    def one_minus_c_over_n(cls, c: float = 1.0):
        return cls("one-minus-c/n", c)

    @classmethod
    def nth_root_of(cls, a: float):
        return cls("nthroot", a)

    @classmethod
    def one_minus_c_over_sqrt_n(cls, c: float = 1.0):
        return cls("one-minus-c/sqrt-n", c)

    @classmethod
    def fixed(cls, q: float):
        return cls("fixed", q)

    def __call__(self, n: int) -> float:
        if n < 1:
            raise ValueError("n must be at least 1")
        if self.kind == "nthroot":
            q = math.exp(math.log(self.value) / n)
        elif self.kind == "one-minus-c/n":
            q = 1 - self.value / n
        elif self.kind == "one-minus-c/sqrt-n":
            q = 1 - self.value / math.sqrt(n)
        else:
            q = self.value
        if not 0 < q < 1:
            raise ValueError(f"{self.kind}:{self.value} gives q_{n} = {q}, outside (0, 1)")
        return q

    @property
    def limit(self) -> float | None:
        """lim q_n^n, or None for a fixed q."""
        if self.kind == "nthroot":
            return self.value
        if self.kind == "one-minus-c/n":
            return math.exp(-self.value)
        if self.kind == "one-minus-c/sqrt-n":
            return 0.0
        return None

    def __str__(self):
        return f"{self.kind}:{self.value:g}"


@dataclass(frozen=True)
class MomentReport:
    m0: float
    m1: float
    m2: float
    central2: float
    central2_bound: float
    at_x: float
    spec: OperatorSpec


def moment_report(n: int, q: float, params: StancuParams, x: float) -> MomentReport:
    m1 = float(moment1_closed(n, q, params, x))
    m2 = float(moment2_closed(n, q, params, x))
    return MomentReport(
        m0=1.0,
        m1=m1,
        m2=m2,
        central2=m2 - 2 * x * m1 + x * x,
        central2_bound=central2_bound(n, q, params),
        at_x=x,
        spec=q_kantorovich_stancu(n, q, params),
    )
