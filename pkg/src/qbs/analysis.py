"""Moduli of continuity/smoothness, error-bound calculators and the
convergence experiments for the Kantorovich q-Bernstein-Stancu operator.

Moduli are estimated on an equispaced grid of [0, 1]. A grid estimate is a
lower bound of the true modulus, so checks that put a modulus on the
right-hand side carry a small slack.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .moments import (
    NegativeDeltaError,
    QSequence,
    central2_exact,
    delta_n,
    delta_n_x,
    derived_variance_limit,
    local_shift_coeffs,
    scaled_limits,
)
from .operators import TargetFunction, apply, operator_domain, q_kantorovich_stancu
from .qcalc import DEFAULT_TOL, JacksonTolerance, JacksonTruncationError, QValue, q_integer
from .stancu_basis import StancuParams

log = logging.getLogger(__name__)

MODULUS_GRID = 2001
SUP_GRID = 501
THEOREM_4_1_CONSTANT = 4.0


@dataclass(frozen=True)
class ModulusEstimate:
    delta: float
    value: float
    grid_points: int


@dataclass(frozen=True)
class ExperimentRow:
    n: int
    q: float
    sup_error: float
    bound: float
    x_argmax: float
    grid_points: int = MODULUS_GRID
    diagnostic: str = ""


@lru_cache(maxsize=128)
def _shift_profile(fn, order: int, grid_points: int) -> np.ndarray:
    """profile[s] = worst first (order 1) or second (order 2) difference at
    grid step s, made nondecreasing; profile[0] = 0."""
    x = np.linspace(0.0, 1.0, grid_points)
    v = np.asarray(fn(x), dtype=float)
    if v.shape != x.shape:
        v = np.broadcast_to(v, x.shape)
    steps = grid_points - 1 if order == 1 else (grid_points - 1) // 2
    prof = np.zeros(steps + 1)
    for s in range(1, steps + 1):
        if order == 1:
            prof[s] = np.max(np.abs(v[s:] - v[:-s]))
        else:
            prof[s] = np.max(np.abs(v[: -2 * s] - 2 * v[s:-s] + v[2 * s :]))
    return np.maximum.accumulate(prof)


def _steps_within(delta: float, grid_points: int, cap: int) -> int:
    h = 1.0 / (grid_points - 1)
    return min(cap, int(math.floor(delta / h + 1e-9)))


def _modulus(fn, delta, grid_points, order):
    if not delta > 0:
        raise ValueError("delta must be positive")
    if grid_points < 2:
        raise ValueError("grid_points must be at least 2")
    prof = _shift_profile(fn, order, grid_points)
    return ModulusEstimate(delta, float(prof[_steps_within(delta, grid_points, len(prof) - 1)]), grid_points)


def modulus(f, delta: float, grid_points: int = MODULUS_GRID) -> ModulusEstimate:
    """Grid estimate of sup{|f(x) - f(y)| : |x - y| <= delta}."""
    return _modulus(_callable(f), delta, grid_points, 1)


def second_modulus(f, delta: float, grid_points: int = MODULUS_GRID) -> ModulusEstimate:
    """Grid estimate of sup over 0 < h <= delta of |f(x-h) - 2f(x) + f(x+h)|."""
    return _modulus(_callable(f), delta, grid_points, 2)


def _callable(f):
    return f.eval if isinstance(f, TargetFunction) else f


def _require(f: TargetFunction, what: str):
    if getattr(f, what, None) is None:
        raise ValueError(f"{f.name} lacks {what} metadata")


def sup_error(spec, f, grid_points: int = SUP_GRID, tol: JacksonTolerance = DEFAULT_TOL):
    """(max |K f - f|, argmax) over an equispaced grid of the operator domain."""
    xs = operator_domain(spec).grid(grid_points)
    err = np.abs(apply(spec, f, xs, tol) - f(xs))
    i = int(np.argmax(err))
    return float(err[i]), float(xs[i])


def bound_theorem_3_2(f, n: int, q: float, params: StancuParams, grid_points: int = MODULUS_GRID) -> float:
    """2 omega(f, delta_n)."""
    return 2.0 * modulus(f, delta_n(n, q, params), grid_points).value


def bound_theorem_4_1(
    f,
    n: int,
    q: float,
    params: StancuParams,
    x,
    C: float = THEOREM_4_1_CONSTANT,
    grid_points: int = MODULUS_GRID,
):
    """C omega_2(f, sqrt(delta_n(x))) + omega(f, |(a_n - 1) x + b_n|).

    C is a configured constant; the bound holds only up to its choice.
    """
    fn = _callable(f)
    a_n, b_n = local_shift_coeffs(n, q, params)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty(xs.shape)
    for i, xi in enumerate(xs):
        dnx = float(delta_n_x(n, q, params, xi))
        w2 = second_modulus(fn, math.sqrt(dnx), grid_points).value if dnx > 0 else 0.0
        shift = abs((a_n - 1) * xi + b_n)
        w1 = modulus(fn, shift, grid_points).value if shift > 0 else 0.0
        out[i] = C * w2 + w1
    return float(out[0]) if np.ndim(x) == 0 else out


def bound_shisha_mond(m0, m1_shift, central2, delta, f_at_x, fprime_at_x, omega_fprime_at_delta):
    """General estimate for a positive linear operator L at x, with
    m0 = L(1; x), m1_shift = L(t - x; x), central2 = L((t - x)^2; x)."""
    if central2 < 0:
        raise ValueError("central2 must be nonnegative")
    if not delta > 0:
        raise ValueError("delta must be positive")
    root = math.sqrt(central2)
    return (
        abs(f_at_x) * abs(m0 - 1)
        + abs(fprime_at_x) * abs(m1_shift)
        + root * (math.sqrt(m0) + root / delta) * omega_fprime_at_delta
    )


def _theorem_4_4_shift(n, q, params, x):
    q = QValue(q)
    a1, a2, b1, b2 = params.as_tuple()
    N = q_integer(n, q)
    D = q_integer(n + 1, q) + b1
    return (2 * q / (1 + q) * (N + b2) / D - 1) * x + (1 + a1 + q * a1 - 2 * q * a2) / ((1 + q) * D)


def bound_theorem_4_4(
    f: TargetFunction, n: int, q: float, params: StancuParams, x, grid_points: int = MODULUS_GRID
):
    """|shift| |f'(x)| + 2 sqrt(D) omega(f', sqrt(D)) with D = K((t-x)^2; x)."""
    _require(f, "d1")
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    fp = f.derivative(xs)
    out = np.empty(xs.shape)
    for i, xi in enumerate(xs):
        D = max(float(central2_exact(n, q, params, xi)), 0.0)
        first = abs(_theorem_4_4_shift(n, q, params, xi)) * abs(fp[i])
        second = 2 * math.sqrt(D) * modulus(f.d1, math.sqrt(D), grid_points).value if D > 0 else 0.0
        out[i] = first + second
    return float(out[0]) if np.ndim(x) == 0 else out


def bound_lipschitz(f: TargetFunction, n: int, q: float, params: StancuParams) -> float:
    """M delta_n^alpha for f in Lip_M(alpha)."""
    _require(f, "lipschitz")
    return f.lipschitz.M * delta_n(n, q, params) ** f.lipschitz.alpha


def voronovskaja_deviation(
    f: TargetFunction,
    qseq: QSequence,
    params: StancuParams,
    n: int,
    x_grid: Sequence[float],
    tol: JacksonTolerance = DEFAULT_TOL,
    limits: str = "stated",
) -> float:
    """max_x |[n](K f(x) - f(x)) - (f'(x) L1(x) + f''(x) L2(x) / 2)|.

    ``limits="stated"`` uses L2 from :func:`scaled_limits`;
    ``limits="derived"`` uses x(1 - x) instead.
    """
    if limits not in ("stated", "derived"):
        raise ValueError("limits must be 'stated' or 'derived'")
    _require(f, "d1")
    _require(f, "d2")
    a = qseq.limit
    if a is None:
        raise ValueError("a fixed q has no Voronovskaja limit; use a sequence with q_n -> 1")
    q = qseq(n)
    spec = q_kantorovich_stancu(n, q, params)
    xs = np.asarray(x_grid, dtype=float)
    L1, L2 = scaled_limits(xs, a, params)
    if limits == "derived":
        L2 = derived_variance_limit(xs)
    scaled = q_integer(n, q) * (apply(spec, f, xs, tol) - f(xs))
    limit = f.derivative(xs, 1) * L1 + 0.5 * f.derivative(xs, 2) * L2
    return float(np.max(np.abs(scaled - limit)))


def _row(f, n, q, params, grid_points, modulus_grid, tol) -> ExperimentRow:
    spec = q_kantorovich_stancu(n, q, params)
    try:
        err, xarg = sup_error(spec, f, grid_points, tol)
    except (JacksonTruncationError, ValueError) as exc:
        log.warning("row n=%d q=%g aborted: %s", n, q, exc)
        return ExperimentRow(n, q, math.nan, math.nan, math.nan, modulus_grid, str(exc))
    try:
        bound = bound_theorem_3_2(f, n, q, params, modulus_grid)
        note = ""
    except NegativeDeltaError as exc:
        bound, note = math.nan, str(exc)
    return ExperimentRow(n, q, err, bound, xarg, modulus_grid, note)


def convergence_sweep(
    f,
    qseq: QSequence,
    params: StancuParams,
    n_list: Sequence[int],
    grid_points: int = SUP_GRID,
    modulus_grid: int = MODULUS_GRID,
    tol: JacksonTolerance = DEFAULT_TOL,
) -> list[ExperimentRow]:
    """One row per n with q = qseq(n); rows keep the order of n_list."""
    n_list = list(n_list)
    if not n_list:
        raise ValueError("n_list is empty")
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("n_list must be strictly ascending")
    return [_row(f, n, qseq(n), params, grid_points, modulus_grid, tol) for n in n_list]


def q_sweep(
    f,
    n: int,
    q_list: Sequence[float],
    params: StancuParams,
    grid_points: int = SUP_GRID,
    modulus_grid: int = MODULUS_GRID,
    tol: JacksonTolerance = DEFAULT_TOL,
) -> list[ExperimentRow]:
    """Fixed n, one row per q."""
    return [_row(f, n, QValue(q), params, grid_points, modulus_grid, tol) for q in q_list]
