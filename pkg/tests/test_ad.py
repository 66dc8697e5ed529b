"""Forward-mode AD against finite differences, including nested use."""

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from gkspin import ad

finite = st.floats(-2.0, 2.0, allow_nan=False)


def fd(f, x, v, h=1e-6):
    return (np.asarray(f(x + h * v)) - np.asarray(f(x - h * v))) / (2 * h)


def rational(x):
    m = ad.outer(x, x) + np.eye(3)
    return ad.inv(m) @ x / ad.sqrt(1 + x @ x)


@given(arrays(float, 3, elements=finite), arrays(float, 3, elements=finite))
def test_directional_derivative_matches_fd(x, v):
    got = ad.derivative(rational, x, v)
    np.testing.assert_allclose(got, fd(rational, x, v), atol=1e-6)


def test_jacobian_rows_are_partials():
    x = np.array([0.3, -0.2, 0.7])
    jac = ad.jacobian(lambda y: ad.exp(y) * y[0], x)
    for i in range(3):
        np.testing.assert_allclose(jac[i], fd(lambda y: np.exp(y) * y[0], x, np.eye(3)[i]), atol=1e-7)


def test_matmul_shapes():
    m = np.arange(9.0).reshape(3, 3)
    x = np.array([1.0, 2.0, -1.0])
    v = np.array([0.5, 0.1, 0.2])
    np.testing.assert_allclose(ad.derivative(lambda y: y @ m, x, v), v @ m)
    np.testing.assert_allclose(ad.derivative(lambda y: m @ y, x, v), m @ v)
    np.testing.assert_allclose(ad.derivative(lambda y: ad.outer(y, y) @ m, x, v),
                               (np.outer(v, x) + np.outer(x, v)) @ m)


def test_nested_second_derivative():
    f = lambda y: ad.sqrt(1 + y @ y) * y[1]
    x = np.array([0.4, -0.3])

    def grad(y):
        return ad.jacobian(f, y)

    hess = ad.jacobian(grad, x)
    h = 1e-5
    num = np.stack([(np.asarray(grad(x + h * e)) - np.asarray(grad(x - h * e))) / (2 * h)
                    for e in np.eye(2)])
    np.testing.assert_allclose(hess, num, atol=1e-7)
    np.testing.assert_allclose(hess, hess.T, atol=1e-12)


def test_no_perturbation_confusion():
    # d/dx [ x * d/dy (x + y) ] = 1, not 2
    def inner(x):
        return x * ad.derivative(lambda y: x + y, 1.0, 1.0)

    assert ad.derivative(inner, 1.0, 1.0) == pytest.approx(1.0)


def test_constant_function_has_zero_tangent():
    out = ad.jvp(lambda y: np.ones(4), np.zeros(2), np.eye(2))
    assert out.shape == (2, 4)
    assert not out.any()


def test_einsum_requires_explicit_output():
    d = ad.Dual(np.ones(2), np.ones((1, 2)), 99999)
    with pytest.raises(ValueError):
        ad.einsum("i,i", d, d)


def test_negative_power_rejected():
    d = ad.Dual(np.ones(2), np.ones((1, 2)), 99998)
    with pytest.raises(ValueError):
        d ** -1
