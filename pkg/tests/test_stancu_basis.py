import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from qbs.stancu_basis import (
    StancuDomain,
    StancuParams,
    bernstein_matrix,
    classical_stancu_domain,
    q_bernstein_matrix,
    q_bernstein_weights,
    rescale,
    stancu_domain,
    stancu_weights,
    unscale,
)

PARAMS = [
    StancuParams(0, 0, 0, 0),
    StancuParams(1, 2, 3, 4),
    StancuParams(0, 1, 1, 2),
    StancuParams(2, 2, 2, 2),
]


def test_params_ordering_enforced():
    with pytest.raises(ValueError, match="alpha1 <= alpha2"):
        StancuParams(2, 1, 3, 4)
    with pytest.raises(ValueError):
        StancuParams(-1, 0, 0, 0)
    with pytest.raises(ValueError):
        StancuParams(0, 0, 0, math.inf)


def test_zero_params():
    assert StancuParams().is_zero
    assert not StancuParams(0, 0, 0, 1).is_zero


def test_domain_endpoints():
    dom = stancu_domain(4, 0.5, StancuParams(1, 2, 3, 4))
    N = oracles.qint(4, 0.5)
    assert dom.a == pytest.approx(2 / (N + 4))
    assert dom.b == pytest.approx((N + 2) / (N + 4))
    assert classical_stancu_domain(4, StancuParams()) == StancuDomain(0.0, 1.0)


def test_rescale_roundtrip():
    dom = StancuDomain(0.2, 0.7)
    x = [0.2, 0.45, 0.7]
    np.testing.assert_allclose(rescale(x, dom), [0, 0.5, 1])
    np.testing.assert_allclose(unscale(rescale(x, dom), dom), x)


@pytest.mark.parametrize("params", PARAMS)
@pytest.mark.parametrize("q", [0.3, 0.5, 0.9, 0.99])
def test_partition_of_unity_and_nonnegativity(params, q):
    for n in range(1, 33):
        xs = stancu_domain(n, q, params).grid(21)
        w = stancu_weights(n, q, params, xs)
        assert np.all(w.in_domain)
        assert np.max(np.abs(w.total - 1)) <= 1e-12
        assert np.min(w.weights) >= -1e-15


@pytest.mark.parametrize("params", PARAMS)
def test_weights_match_definition(params):
    n, q = 6, 0.7
    for x in stancu_domain(n, q, params).grid(5):
        got = stancu_weights(n, q, params, x)
        np.testing.assert_allclose(got.weights, oracles.weights(n, q, params.as_tuple(), x), atol=1e-14)


def test_reduces_to_q_bernstein_without_shift():
    xs = np.linspace(0, 1, 7)
    np.testing.assert_allclose(stancu_weights(5, 0.6, StancuParams(), xs).weights, q_bernstein_matrix(5, 0.6, xs))


def test_tends_to_classical_bernstein():
    u = np.linspace(0, 1, 9)
    np.testing.assert_allclose(q_bernstein_matrix(8, 1 - 1e-9, u), bernstein_matrix(8, u), atol=1e-7)


def test_outside_domain_flagged():
    w = stancu_weights(4, 0.5, StancuParams(1, 2, 3, 4), 0.0)
    assert w.in_domain is False


def test_q_bernstein_weights_endpoints():
    w0 = q_bernstein_weights(5, 0.4, 0.0).weights
    w1 = q_bernstein_weights(5, 0.4, 1.0).weights
    assert w0[0] == 1 and np.all(w0[1:] == 0)
    assert w1[-1] == pytest.approx(1) and np.allclose(w1[:-1], 0)


@given(
    n=st.integers(1, 40),
    q=st.floats(0.05, 0.999),
    u=st.floats(0, 1),
)
@settings(max_examples=100, deadline=None)
def test_partition_property(n, q, u):
    assert q_bernstein_matrix(n, q, u).sum() == pytest.approx(1, abs=1e-12)
