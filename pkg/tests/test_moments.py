import math

import numpy as np
import pytest

import oracles
from qbs.moments import (
    NegativeDeltaError,
    QSequence,
    central2_bound,
    central2_exact,
    delta_n,
    delta_n_x,
    derived_variance_limit,
    local_shift_coeffs,
    moment1_closed,
    moment2_closed,
    moment2_q_shifted_reading,
    moment_report,
    scaled_limits,
)
from qbs.stancu_basis import StancuParams, stancu_domain

PARAMS = [StancuParams(0, 0, 0, 0), StancuParams(1, 2, 3, 4), StancuParams(0, 1, 1, 2), StancuParams(2, 2, 2, 2)]
NS = [1, 2, 4, 8, 16]
QS = [0.3, 0.5, 0.9, 0.99]


def _brute(n, q, params, x, power):
    return oracles.kantorovich_q_stancu(lambda t: t**power, n, q, params.as_tuple(), x)


@pytest.mark.parametrize("params", PARAMS)
@pytest.mark.parametrize("q", QS)
def test_closed_forms_match_definition(params, q):
    for n in (1, 2, 5):
        for x in stancu_domain(n, q, params).grid(4):
            assert moment1_closed(n, q, params, x) == pytest.approx(_brute(n, q, params, x, 1), abs=1e-10)
            assert moment2_closed(n, q, params, x) == pytest.approx(_brute(n, q, params, x, 2), abs=1e-10)


def test_q_shifted_reading_does_not_match():
    p = StancuParams(1, 2, 3, 4)
    n, q = 4, 0.5
    xs = stancu_domain(n, q, p).grid(5)
    brute = np.array([_brute(n, q, p, x, 2) for x in xs])
    assert np.max(np.abs(moment2_closed(n, q, p, xs) - brute)) < 1e-12
    assert np.max(np.abs(moment2_q_shifted_reading(n, q, p, xs) - brute)) > 1e-4


def test_readings_coincide_without_left_shift():
    xs = np.linspace(0, 1, 5)
    p = StancuParams(0, 0, 1, 1)
    np.testing.assert_allclose(moment2_q_shifted_reading(3, 0.4, p, xs), moment2_closed(3, 0.4, p, xs))


def test_classical_limits_near_one():
    # q -> 1, zero params: K(t; x) = (n x + 1/2) / (n + 1)
    n, x = 10, 0.3
    assert moment1_closed(n, 1 - 1e-10, StancuParams(), x) == pytest.approx((n * x + 0.5) / (n + 1), abs=1e-8)


@pytest.mark.parametrize("n", [1, 5, 99])
def test_central2_bound_spot_value(n):
    assert central2_bound(n, 1 - 1e-12, StancuParams()) == pytest.approx(1 / (n + 1), abs=1e-9)


def test_delta_n_spot_value():
    assert delta_n(99, 1 - 1e-12, StancuParams()) == pytest.approx(0.1, abs=1e-9)


def test_delta_n_negative_reported():
    with pytest.raises(NegativeDeltaError):
        delta_n(4, 0.3, StancuParams(2, 2, 2, 2))


@pytest.mark.parametrize("params", PARAMS)
@pytest.mark.parametrize("q", QS)
def test_local_shift_identity(params, q):
    for n in NS:
        xs = stancu_domain(n, q, params).grid(11)
        a_n, b_n = local_shift_coeffs(n, q, params)
        np.testing.assert_allclose(a_n * xs + b_n, moment1_closed(n, q, params, xs), atol=1e-13)


@pytest.mark.parametrize("params", PARAMS)
@pytest.mark.parametrize("q", QS)
def test_delta_n_x_dominates(params, q):
    for n in NS:
        xs = stancu_domain(n, q, params).grid(11)
        a_n, b_n = local_shift_coeffs(n, q, params)
        rhs = central2_exact(n, q, params, xs) + (a_n * xs + b_n - xs) ** 2
        assert np.all(delta_n_x(n, q, params, xs) >= rhs - 1e-10)
        assert np.all(delta_n_x(n, q, params, xs) > 0)


def test_central2_nonnegative():
    for p in PARAMS:
        for q in QS:
            for n in NS:
                assert np.min(central2_exact(n, q, p, stancu_domain(n, q, p).grid(21))) >= -1e-14


def test_first_limit_holds():
    a = 0.5
    seq = QSequence.nth_root_of(a)
    p = StancuParams(0, 1, 1, 2)
    xs = np.linspace(0.2, 0.8, 5)
    L1, _ = scaled_limits(xs, a, p)
    devs = []
    for n in (16, 256, 4096):
        q = seq(n)
        N = oracles.qint(n, q)
        devs.append(np.max(np.abs(N * (moment1_closed(n, q, p, xs) - xs) - L1)))
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 1e-2


def test_variance_limit_is_x_one_minus_x():
    seq = QSequence.nth_root_of(0.5)
    xs = np.linspace(0.2, 0.8, 5)
    for p in PARAMS:
        n = 4096
        q = seq(n)
        scaled = oracles.qint(n, q) * central2_exact(n, q, p, xs)
        np.testing.assert_allclose(scaled, derived_variance_limit(xs), atol=5e-3)


def test_scaled_limits_rejects_a():
    with pytest.raises(ValueError):
        scaled_limits(0.5, 1.0, StancuParams())


def test_qsequence_kinds():
    assert QSequence.one_minus_c_over_n(1)(4) == 0.75
    assert QSequence.nth_root_of(0.5)(2) ** 2 == pytest.approx(0.5)
    assert QSequence.one_minus_c_over_sqrt_n(1)(4) == 0.5
    assert QSequence.fixed(0.9)(100) == 0.9
    assert QSequence.one_minus_c_over_n(1).limit == pytest.approx(math.exp(-1))
    assert QSequence.one_minus_c_over_sqrt_n(1).limit == 0
    assert QSequence.fixed(0.9).limit is None
    assert str(QSequence.nth_root_of(0.5)) == "nthroot:0.5"


def test_qsequence_errors():
    with pytest.raises(ValueError):
        QSequence.nth_root_of(0)
    with pytest.raises(ValueError):
        QSequence("bogus", 1)
    with pytest.raises(ValueError):
        QSequence.one_minus_c_over_n(1)(1)


def test_moment_report():
    r = moment_report(4, 0.5, StancuParams(0, 1, 1, 2), 0.4)
    assert r.m0 == 1
    assert r.central2 == pytest.approx(float(central2_exact(4, 0.5, StancuParams(0, 1, 1, 2), 0.4)))
    assert r.spec.n == 4
