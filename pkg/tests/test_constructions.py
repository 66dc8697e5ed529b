"""Explicit candidates and their defining properties."""

import numpy as np
import pytest

from gkspin.constructions import (
    S3_GKS_A,
    SHIPPED,
    construct,
    make_killing_spinor,
    make_s3_gks,
    restrict_parallel_spinor,
    surface_by_name,
)
from gkspin.gks import gks_residual
from gkspin.manifolds import geometry_at, sphere_hypersurface


@pytest.mark.parametrize("name", SHIPPED + ("killing:s3:-", "killing:s4:-", "killing:s3group:+",
                                             "killing:s3group:-", "restrict:ellipsoid4"))
def test_candidates_solve_the_equation(name, rng):
    c = construct(name)
    for p in c.model.sample(rng, 3):
        assert gks_residual(c, p) < 1e-10


@pytest.mark.parametrize("model,sign", [("s3", 1), ("s3", -1), ("s5", 1), ("s5", -1)])
def test_killing_sign(model, sign):
    c = construct(f"killing:{model}:{'+' if sign > 0 else '-'}")
    n = c.n
    np.testing.assert_allclose(c.endo(np.zeros(n)), 0.5 * sign * np.eye(n))
    assert c.conventions["killing_sign"] == sign


def test_s3_gks():
    c = make_s3_gks()
    p = np.array([0.4, 0.2, -0.6])
    ev = c.at(p)
    np.testing.assert_allclose(np.linalg.eigvalsh(ev.A), [-1.5, -1.5, 0.5])
    np.testing.assert_allclose(ev.A, S3_GKS_A)
    # A is not Codazzi: (nabla_2 A) e_3 != (nabla_3 A) e_2
    assert np.linalg.norm(ev.T[:, 1, 2]) > 0.1


@pytest.mark.parametrize("surface", ["ellipsoid2", "ellipsoid3", "paraboloid4"])
def test_restriction_endomorphism_is_half_shape_operator(surface, rng):
    c = construct(f"restrict:{surface}")
    for p in c.model.sample(rng, 2):
        ev = c.at(p)
        np.testing.assert_allclose(ev.A, 0.5 * ev.geom.shape_op, atol=1e-12)
        # recover A from psi and nabla psi alone
        cols = np.einsum("iab,b->ai", ev.g, ev.psi)
        sol, *_ = np.linalg.lstsq(cols, ev.nabla.T, rcond=None)
        np.testing.assert_allclose(sol, ev.A, atol=1e-9)


@pytest.mark.parametrize("r", [1.0, 0.5, 2.0])
def test_sphere_determinant(r):
    c = restrict_parallel_spinor(sphere_hypersurface(2, r))
    det = np.linalg.det(c.endo(np.array([0.3, -0.4])))
    assert det == pytest.approx(1 / (4 * r * r), rel=1e-10)


def test_paraboloid_vertex():
    c = construct("restrict:paraboloid4")
    np.testing.assert_allclose(c.endo(np.zeros(4)), 0.5 * np.eye(4), atol=1e-12)


def test_other_chirality():
    surface = surface_by_name("ellipsoid3")
    c = restrict_parallel_spinor(surface, chirality=-1)
    p = np.array([0.2, 0.1, -0.3])
    assert gks_residual(c, p) < 1e-10


def test_spinor_outside_module_rejected():
    surface = surface_by_name("ellipsoid3")
    with pytest.raises(ValueError):
        restrict_parallel_spinor(surface, phi0=np.ones(8))
    with pytest.raises(ValueError):
        restrict_parallel_spinor(surface, phi0=np.ones(3))


def test_bad_inputs():
    with pytest.raises(ValueError):
        make_killing_spinor(sphere_hypersurface(3), 2)
    with pytest.raises(ValueError):
        make_killing_spinor(surface_by_name("ellipsoid2"), 1)
    for name in ("nope", "killing:s9:+", "killing:s3:x", "restrict:torus"):
        with pytest.raises(KeyError):
            construct(name)
