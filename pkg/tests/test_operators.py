import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from qbs.functions import builtin
from qbs.operators import (
    DomainWarning,
    Kind,
    Lipschitz,
    OperatorSpec,
    TargetFunction,
    apply,
    endpoint_value,
    node_functionals,
    operator_domain,
    q_kantorovich_stancu,
    sample_nodes,
)
from qbs.stancu_basis import StancuParams

PARAMS = [StancuParams(0, 0, 0, 0), StancuParams(1, 2, 3, 4), StancuParams(0, 1, 1, 2), StancuParams(2, 2, 2, 2)]
fig6 = builtin("fig6")


def test_classical_kantorovich_spot_value():
    spec = OperatorSpec(Kind.KANTOROVICH, 1)
    assert apply(spec, lambda t: t, 0.0) == pytest.approx(0.25, abs=1e-15)


def test_bernstein_reproduces_linear():
    spec = OperatorSpec(Kind.BERNSTEIN, 7)
    xs = np.linspace(0, 1, 11)
    np.testing.assert_allclose(apply(spec, lambda t: 3 * t - 1, xs), 3 * xs - 1, atol=1e-14)


@pytest.mark.parametrize("params", PARAMS)
@pytest.mark.parametrize("q", [0.3, 0.9])
def test_matches_term_by_term_definition(params, q):
    n = 5
    spec = q_kantorovich_stancu(n, q, params)
    xs = operator_domain(spec).grid(4)
    got = apply(spec, fig6, xs)
    ref = [oracles.kantorovich_q_stancu(fig6, n, q, params.as_tuple(), x) for x in xs]
    np.testing.assert_allclose(got, ref, atol=1e-13)


@pytest.mark.parametrize("n", [1, 4, 16])
def test_near_one_matches_classical_kantorovich(n):
    xs = np.linspace(0, 1, 9)
    got = apply(q_kantorovich_stancu(n, 1 - 1e-8), fig6, xs)
    ref = [oracles.classical_kantorovich(fig6, n, x) for x in xs]
    np.testing.assert_allclose(got, ref, atol=1e-5)


def test_zero_params_is_q_bernstein_kantorovich():
    xs = np.linspace(0, 1, 9)
    a = apply(q_kantorovich_stancu(6, 0.7), fig6, xs)
    b = apply(OperatorSpec(Kind.Q_BERNSTEIN_KANTOROVICH, 6, 0.7), fig6, xs)
    np.testing.assert_allclose(a, b, atol=1e-12)


def test_kantorovich_stancu_tends_classical():
    p = StancuParams(0, 1, 1, 2)
    spec_q = q_kantorovich_stancu(6, 1 - 1e-8, p)
    spec_c = OperatorSpec(Kind.KANTOROVICH_STANCU, 6, params=p)
    dom = operator_domain(spec_q)
    xs = np.linspace(dom.a, dom.b, 9)[1:-1]
    np.testing.assert_allclose(apply(spec_q, fig6, xs), apply(spec_c, fig6, xs), atol=1e-5)


@pytest.mark.parametrize("kind", list(Kind))
def test_positivity_and_constants(kind):
    spec = OperatorSpec(kind, 8, 0.8, StancuParams(1, 2, 3, 4))
    xs = operator_domain(spec).grid(21)
    assert np.min(apply(spec, lambda t: (t - 0.4) ** 2, xs)) >= -1e-12
    np.testing.assert_allclose(apply(spec, lambda t: np.ones_like(t), xs), 1, atol=1e-12)


def test_linearity():
    spec = q_kantorovich_stancu(7, 0.6, StancuParams(0, 1, 1, 2))
    xs = operator_domain(spec).grid(5)
    f, g = np.sin, np.exp
    np.testing.assert_allclose(
        apply(spec, lambda t: 2 * f(t) - g(t), xs), 2 * apply(spec, f, xs) - apply(spec, g, xs), atol=1e-13
    )


def test_scalar_and_array_results():
    spec = q_kantorovich_stancu(3, 0.5)
    assert isinstance(apply(spec, np.exp, 0.3), float)
    assert apply(spec, np.exp, [0.3, 0.4]).shape == (2,)


def test_non_stancu_rejects_outside_unit_interval():
    with pytest.raises(ValueError):
        apply(OperatorSpec(Kind.BERNSTEIN, 3), np.exp, 1.2)


def test_stancu_outside_domain_warns():
    spec = q_kantorovich_stancu(4, 0.5, StancuParams(1, 2, 3, 4))
    with pytest.warns(DomainWarning):
        apply(spec, np.exp, 0.0)


def test_inside_domain_does_not_warn():
    spec = q_kantorovich_stancu(4, 0.5, StancuParams(1, 2, 3, 4))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        apply(spec, np.exp, operator_domain(spec).grid(5))


def test_nodes_inside_unit_interval():
    for p in PARAMS:
        for q in (0.3, 0.99):
            for node in sample_nodes(q_kantorovich_stancu(16, q, p)):
                assert 0 <= node.lo <= node.hi <= 1 + 1e-15


def test_endpoint_value_is_first_functional():
    spec = q_kantorovich_stancu(5, 0.5, StancuParams(0, 1, 1, 2))
    a = operator_domain(spec).a
    assert endpoint_value(spec, np.exp) == pytest.approx(apply(spec, np.exp, a), abs=1e-14)
    assert endpoint_value(spec, np.exp) == pytest.approx(node_functionals(spec, np.exp)[0])


def test_spec_validation():
    with pytest.raises(ValueError):
        OperatorSpec(Kind.Q_KANTOROVICH_STANCU, 0, 0.5, StancuParams())
    with pytest.raises(ValueError):
        OperatorSpec(Kind.Q_BERNSTEIN_KANTOROVICH, 3)
    with pytest.raises(ValueError):
        OperatorSpec(Kind.STANCU_SHIFTED, 3)
    assert OperatorSpec("bernstein", 3, 0.5).q is None
    assert OperatorSpec("kantorovich-stancu", 3, params=(0, 0, 1, 1)).params == StancuParams(0, 0, 1, 1)


def test_target_function_validation():
    with pytest.raises(ValueError, match="not finite"), np.errstate(divide="ignore"):
        TargetFunction(lambda x: 1 / (x - 0.5))
    with pytest.raises(ValueError, match="violates"):
        TargetFunction(lambda x: 3 * x, lipschitz=Lipschitz(1, 1))
    f = TargetFunction(lambda x: 2.0)
    assert f(np.zeros(3)).shape == (3,)
    with pytest.raises(ValueError):
        f.derivative(0.1)


@given(n=st.integers(1, 20), q=st.floats(0.1, 0.99), x=st.floats(0, 1))
@settings(max_examples=50, deadline=None)
def test_constants_reproduced_property(n, q, x):
    assert apply(q_kantorovich_stancu(n, q), lambda t: np.full_like(t, 2.5), x) == pytest.approx(2.5, abs=1e-12)
