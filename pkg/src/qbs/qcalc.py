"""q-calculus primitives: q-integers, q-factorials, q-binomials and the
Jackson q-integral on [0, A].

All functions assume 0 < q < 1. The classical q = 1 case is handled by the
dedicated classical operators, never here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

# n at or below this uses the explicit sum; above it the expm1 closed form
_SUM_CUTOFF = 32

# Gregory coefficients for sum_{j>=0} g(j) - int_0^inf g(s) ds, applied to
# forward differences of g at 0
_GREGORY = (
    1 / 2,
    -1 / 12,
    1 / 24,
    -19 / 720,
    3 / 160,
    -863 / 60480,
    275 / 24192,
    -33953 / 3628800,
)


class QValue(float):
    """A deformation parameter strictly inside (0, 1)."""

    def __new__(cls, q):
        value = float(q)
        if not (0.0 < value < 1.0) or math.isnan(value):
            raise ValueError(f"q must satisfy 0 < q < 1, got {q!r}")
        return super().__new__(cls, value)


class JacksonTruncationError(RuntimeError):
    """The Jackson series could not be summed to the requested tolerance."""


@dataclass(frozen=True)
class JacksonTolerance:
    """Truncation control for the Jackson series.

    The series stops at the first J whose tail bound A * sup|f| * q^(J+1)
    drops below ``abs_tol``. When that needs more than ``max_terms`` terms and
    ``near_one`` is set, the series is summed with a Gregory end correction
    instead, accepted only if its error estimate is below ``near_one_tol``.
    """

    abs_tol: float = 1e-14
    max_terms: int = 4096
    near_one: bool = True
    near_one_tol: float = 1e-10

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise ValueError("max_terms must be a positive integer")
        if not self.near_one_tol > 0:
            raise ValueError("near_one_tol must be positive")


DEFAULT_TOL = JacksonTolerance()


def q_integer(n: int, q: float) -> float:
    """[n]_q = 1 + q + ... + q^(n-1)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    q = QValue(q)
    if n <= _SUM_CUTOFF:
        total = 0.0
        for _ in range(n):
            total = 1.0 + q * total
        return total
    one_minus_q = 1.0 - q
    return -math.expm1(n * math.log1p(-one_minus_q)) / one_minus_q


def q_factorial(n: int, q: float) -> float:
    if n < 0:
        raise ValueError("n must be nonnegative")
    result = 1.0
    for i in range(2, n + 1):
        result *= q_integer(i, q)
    return result


def q_binomial(n: int, k: int, q: float) -> float:
    """Gaussian binomial coefficient [n k]_q.

    Computed as a running product of ratios so that large n does not
    overflow the intermediate factorials.
    """
    if n < 0 or k < 0:
        raise ValueError("n and k must be nonnegative")
    if k > n:
        raise ValueError(f"q_binomial needs k <= n, got n={n}, k={k}")
    k = min(k, n - k)
    result = 1.0
    for i in range(1, k + 1):
        result *= q_integer(n - k + i, q) / q_integer(i, q)
    return result


def q_binomial_row(n: int, q: float) -> np.ndarray:
    """All [n k]_q for k = 0..n."""
    ints = np.array([q_integer(i, q) for i in range(n + 1)])
    row = np.ones(n + 1)
    for k in range(1, n + 1):
        row[k] = row[k - 1] * ints[n - k + 1] / ints[k]
    # enforce exact symmetry
    return 0.5 * (row + row[::-1])


def q_pochhammer_one_minus(x, m: int, q: float):
    """(1 - x)_q^m = prod_{s<m} (1 - q^s x); accepts scalar or array x."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    q = QValue(q)
    x = np.asarray(x, dtype=float)
    result = np.ones_like(x)
    qs = 1.0
    for _ in range(m):
        result = result * (1.0 - qs * x)
        qs *= q
    return result[()] if result.ndim == 0 else result


def _terms_needed(scale: float, q: float, sup: float, abs_tol: float) -> int:
    """Smallest J whose tail bound scale * sup * q^(J+1) is below abs_tol.

    The tail after index J is scale * (1 - q) * sum_{j>J} f q^j, bounded by
    scale * sup * q^(J+1).
    """
    lead = scale * sup * q
    if lead < abs_tol:
        return 0
    return int(math.floor(math.log(abs_tol / lead) / math.log(q))) + 1


def _gl_unit(points: int = 16, panels: int = 1):
    x, w = np.polynomial.legendre.leggauss(points)
    edges = np.linspace(0.0, 1.0, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def _checked(values):
    values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise ValueError("integrand produced non-finite values")
    return values


def _gregory_rows(f, c, d, q, tol: JacksonTolerance, scale: float):
    """Near q = 1: sum_j g(j) = int_0^inf g + Gregory correction at j = 0,
    where g(s) = f(c + d q^s) q^s."""
    one_minus_q = 1.0 - q
    log_q = math.log1p(-one_minus_q)

    coarse_t, coarse_w = _gl_unit(16, 8)
    fine_t, fine_w = _gl_unit(16, 16)
    coarse = _checked(f(c[:, None] + d[:, None] * coarse_t[None, :])) @ coarse_w
    fine = _checked(f(c[:, None] + d[:, None] * fine_t[None, :])) @ fine_w
    quad_err = np.abs(fine - coarse)

    j = np.arange(len(_GREGORY))
    qj = np.exp(j * log_q)
    g = _checked(f(c[:, None] + d[:, None] * qj[None, :])) * qj[None, :]
    correction = np.zeros(len(c))
    diff = g
    last = np.zeros(len(c))
    for coeff in _GREGORY:
        last = coeff * diff[:, 0]
        correction += last
        diff = np.diff(diff, axis=1)

    integral = fine * (one_minus_q / -log_q) + one_minus_q * correction
    err = scale * (quad_err * (one_minus_q / -log_q) + one_minus_q * np.abs(last))
    worst = float(err.max()) if len(err) else 0.0
    if worst > tol.near_one_tol:
        raise JacksonTruncationError(
            f"Jackson series needs more than {tol.max_terms} terms at q={q} "
            f"and the near-one estimate error {worst:.3g} exceeds "
            f"{tol.near_one_tol:.3g}"
        )
    return integral


def jackson_unit_rows(
    f: Callable,
    c,
    d,
    q: float,
    tol: JacksonTolerance = DEFAULT_TOL,
    scale: float = 1.0,
) -> np.ndarray:
    """Row-wise Jackson integrals int_0^1 f(c_k + d_k t) d_q t.

    ``f`` must accept numpy arrays. ``scale`` multiplies the term bound, so
    that ``scale * result`` is accurate to ``tol.abs_tol``.
    """
    q = QValue(q)
    c = np.atleast_1d(np.asarray(c, dtype=float))
    d = np.atleast_1d(np.asarray(d, dtype=float))
    c, d = np.broadcast_arrays(c, d)
    if c.size == 0:
        return np.zeros(0)

    sup = float(np.max(np.abs(_checked(f(c)))))
    evaluated = 0
    blocks = []
    while True:
        need = _terms_needed(scale, q, sup, tol.abs_tol)
        if need + 1 <= evaluated:
            break
        if need + 1 > tol.max_terms:
            if tol.near_one:
                return _gregory_rows(f, c, d, q, tol, scale)
            raise JacksonTruncationError(
                f"Jackson series needs {need + 1} terms at q={q}, "
                f"cap is {tol.max_terms}"
            )
        upto = min(tol.max_terms, max(need + 1, evaluated + 64))
        j = np.arange(evaluated, upto)
        qj = q ** j
        vals = _checked(f(c[:, None] + d[:, None] * qj[None, :]))
        sup = max(sup, float(np.max(np.abs(vals))))
        blocks.append(vals * qj[None, :])
        evaluated = upto

    terms = np.concatenate(blocks, axis=1)[:, : need + 1]
    return (1.0 - q) * terms.sum(axis=1)


def jackson_integral(
    f: Callable, A: float, q: float, tol: JacksonTolerance = DEFAULT_TOL
) -> float:
    """Jackson q-integral of f over [0, A]: A(1-q) sum_j f(A q^j) q^j."""
    if not A > 0:
        raise ValueError("A must be positive")
    row = jackson_unit_rows(f, 0.0, A, q, tol, scale=A)
    return float(A * row[0])
