"""Clifford module: relations, chirality, quaternionic structure, spin lifts."""

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from gkspin.clifford import (
    basis_form,
    build_clifford_rep,
    contract,
    form_inner,
    hodge3,
    hodge4,
    induced_rep,
    mul_two_form,
    mul_vector,
    quaternionic_triple,
    selfdual_bases,
    spin_lift,
    spin_lift_near_identity,
    trace_identity_residual,
    wedge,
)

DIMS = range(2, 9)
REPS = {n: build_clifford_rep(n) for n in DIMS}
finite = st.floats(-3.0, 3.0, allow_nan=False)


@pytest.mark.parametrize("n", DIMS)
def test_generators(n):
    rep = REPS[n]
    assert rep.d == 2 ** (n // 2 + 1)
    g = rep.gammas
    eye = np.eye(rep.d)
    for i in range(n):
        np.testing.assert_allclose(g[i] + g[i].T, 0, atol=1e-14)
        for j in range(n):
            anti = g[i] @ g[j] + g[j] @ g[i]
            np.testing.assert_allclose(anti, -2 * (i == j) * eye, atol=1e-14)


@given(n=st.integers(2, 8), data=st.data())
def test_random_vector_relations(n, data):
    rep = REPS[n]
    x = data.draw(arrays(float, n, elements=finite))
    y = data.draw(arrays(float, n, elements=finite))
    psi = data.draw(arrays(float, rep.d, elements=finite))
    xx = mul_vector(rep, x, mul_vector(rep, x, psi))
    np.testing.assert_allclose(xx, -(x @ x) * psi, atol=1e-10)
    # skew-adjoint: <X.psi, psi> = 0
    assert abs(mul_vector(rep, x, psi) @ psi) < 1e-10 * (1 + abs(psi @ psi) * np.abs(x).sum())
    lhs = mul_two_form(rep, wedge(x, y), psi)
    rhs = mul_vector(rep, x, mul_vector(rep, y, psi)) + (x @ y) * psi
    np.testing.assert_allclose(lhs, rhs, atol=1e-10)


@given(arrays(float, (4, 4), elements=finite), arrays(float, 8, elements=finite))
def test_trace_identity(m, psi):
    rep = REPS[4]
    assert trace_identity_residual(rep, m + m.T, psi) < 1e-9


def test_trace_identity_rejects_nonsymmetric():
    with pytest.raises(ValueError):
        trace_identity_residual(REPS[3], np.triu(np.ones((3, 3))), np.ones(4))


@pytest.mark.parametrize("n", [3, 7])
def test_volume_is_scalar_in_odd_dims(n):
    rep = REPS[n]
    assert rep.volume_sign in (1, -1)
    np.testing.assert_allclose(rep.volume, rep.volume_sign * np.eye(rep.d), atol=1e-14)
    if n == 3:
        assert rep.volume_sign == 1


def test_two_forms_as_vectors_in_dim3(rng):
    rep = REPS[3]
    eps = rep.volume_sign
    for _ in range(10):
        sigma = wedge(rng.normal(size=3), rng.normal(size=3))
        psi = rng.normal(size=rep.d)
        np.testing.assert_allclose(mul_two_form(rep, sigma, psi),
                                   -eps * mul_vector(rep, hodge3(sigma), psi), atol=1e-12)


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_chirality(n):
    rep = REPS[n]
    c = rep.chirality
    eye = np.eye(rep.d)
    np.testing.assert_allclose(c @ c, eye, atol=1e-13)
    np.testing.assert_allclose(c, c.T, atol=1e-13)
    for g in rep.gammas:
        np.testing.assert_allclose(c @ g + g @ c, 0, atol=1e-13)
    p, m = rep.projectors
    assert np.trace(p) == pytest.approx(rep.d / 2)
    np.testing.assert_allclose(p @ m, 0, atol=1e-13)


@pytest.mark.parametrize("n", [3, 5, 7])
def test_no_chirality_in_odd_dims(n):
    with pytest.raises(ValueError):
        REPS[n].chirality


def test_quaternionic_structure():
    rep = REPS[5]
    i, j, k = quaternionic_triple(rep)
    eye = np.eye(rep.d)
    for op in (i, j, k):
        np.testing.assert_allclose(op @ op, -eye, atol=1e-12)
    np.testing.assert_allclose(i @ j, k, atol=1e-12)
    np.testing.assert_allclose(i, rep.volume, atol=1e-12)
    for g in rep.gammas:
        np.testing.assert_allclose(i @ g, g @ i, atol=1e-12)
        np.testing.assert_allclose(j @ g, -g @ j, atol=1e-12)
    with pytest.raises(ValueError):
        quaternionic_triple(REPS[4])


@pytest.mark.parametrize("n", [3, 4, 5])
def test_spin_lift_covers_rotation(n, rng):
    rep = REPS[n]
    q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    if np.linalg.det(q) < 0:
        q[:, 0] *= -1
    s = spin_lift(rep, q)
    np.testing.assert_allclose(s @ s.T, np.eye(rep.d), atol=1e-12)
    for i in range(n):
        np.testing.assert_allclose(s @ rep.gammas[i] @ s.T,
                                   np.einsum("j,jab->ab", q[:, i], rep.gammas), atol=1e-10)


def test_spin_lift_near_identity_agrees(rng):
    rep = REPS[4]
    gen = rng.normal(size=(4, 4)) * 1e-3
    q = scipy.linalg.expm(gen - gen.T)
    np.testing.assert_allclose(spin_lift_near_identity(rep, q), spin_lift(rep, q), atol=1e-11)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_induced_rep(n):
    ambient = build_clifford_rep(n + 1)
    rep, u = induced_rep(ambient)
    assert rep.n == n
    np.testing.assert_allclose(u.T @ u, np.eye(u.shape[1]), atol=1e-13)
    for i in range(n):
        for j in range(n):
            anti = rep.gammas[i] @ rep.gammas[j] + rep.gammas[j] @ rep.gammas[i]
            np.testing.assert_allclose(anti, -2 * (i == j) * np.eye(rep.d), atol=1e-13)


def test_selfdual_bases():
    plus, minus = selfdual_bases()
    for s in plus:
        np.testing.assert_allclose(hodge4(s), s, atol=1e-14)
        assert form_inner(s, s) == pytest.approx(1.0)
    for s in minus:
        np.testing.assert_allclose(hodge4(s), -s, atol=1e-14)
    assert all(abs(form_inner(s, t)) < 1e-14 for s in plus for t in minus)


def test_form_helpers():
    s = basis_form(3, 0, 1)
    np.testing.assert_allclose(contract(s, np.eye(3)[0]), np.eye(3)[1])
    assert form_inner(s, s) == 1.0


@pytest.mark.parametrize("n", [1, 9])
def test_dimension_range(n):
    with pytest.raises(ValueError):
        build_clifford_rep(n)


def test_vector_length_checked():
    with pytest.raises(ValueError):
        mul_vector(REPS[3], np.ones(4), np.ones(4))
