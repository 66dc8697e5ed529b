"""Dimension-specific structure in dimensions 2, 4 and 5."""

import numpy as np
import pytest

from gkspin.constructions import construct
from gkspin.dims import (
    DimensionError,
    Dim4Fields,
    _laplacian,
    dim2_det_check,
    dim4_invariants,
    dim4_selfdual_checks,
    dim5_structure,
)
from gkspin.manifolds import geometry_at

S4 = construct("killing:s4:+")
PARA = construct("restrict:paraboloid4")
S5 = construct("killing:s5:+")


@pytest.mark.parametrize("name", ["restrict:sphere2", "restrict:ellipsoid2", "restrict:paraboloid2"])
def test_det_is_gauss_curvature(name, rng):
    c = construct(name)
    for p in c.model.sample(rng, 4):
        out = dim2_det_check(c, p)
        assert out["residual"] < 1e-8
        assert out["gauss"] > 0


def coordinate_laplacian(model, fn, x, h=1e-3):
    """``-(1/sqrt g) d_i (sqrt g g^ij d_j f)`` by central differences."""
    n = model.n
    eye = np.eye(n)

    def flux(y):
        g = np.asarray(model.metric(y))
        grad = np.array([(fn(y + h * e) - fn(y - h * e)) / (2 * h) for e in eye])
        return np.sqrt(np.linalg.det(g)) * np.linalg.solve(g, grad)

    div = sum((flux(x + h * e)[i] - flux(x - h * e)[i]) / (2 * h) for i, e in enumerate(eye))
    return -div / np.sqrt(np.linalg.det(np.asarray(model.metric(x))))


@pytest.mark.parametrize("cand", [S4, PARA], ids=lambda c: c.name)
def test_laplacian_matches_coordinates(cand):
    fields = Dim4Fields(cand)
    x = np.array([0.3, -0.2, 0.1, 0.25])
    geom = geometry_at(cand.model, x)
    got = _laplacian(cand.model, fields.h, x, geom)
    ref = coordinate_laplacian(cand.model, lambda y: float(fields.h(y)), x)
    assert got == pytest.approx(ref, abs=1e-4)


@pytest.mark.parametrize("cand", [S4, PARA, construct("restrict:ellipsoid4")], ids=lambda c: c.name)
def test_dim4_relations(cand, rng):
    for p in cand.model.sample(rng, 3):
        rec = dim4_invariants(cand, p)
        assert 0.0 <= rec.h <= 1.0
        for key in ("eta_norm", "dh_i", "dh_ii", "dh_iii_d", "dh_iii_delta", "laplace_h", "eta_xi",
                    "xi_solve"):
            assert rec.residuals[key] < 1e-6, key


def test_dim4_einstein(rng):
    for p in S4.model.sample(rng, 3):
        rec = dim4_invariants(S4, p)
        assert rec.lam == pytest.approx(3.0)
        assert abs(rec.C) < 1e-8
        assert rec.residuals["h_eigen"] < 1e-6
        assert np.abs(rec.B_of_xi).max() < 1e-8
        out = dim4_selfdual_checks(S4, p)
        assert max(out.values()) < 1e-8


def test_dim5_structure(rng):
    for p in S5.model.sample(rng, 3):
        rec = dim5_structure(S5, p)
        assert max(rec.residuals.values()) < 1e-7
        assert np.linalg.norm(rec.xi) == pytest.approx(1.0)
        assert rec.alpha * rec.alphas == pytest.approx(np.full(4, 0.25))


def test_dim5_on_negative_killing(rng):
    c = construct("killing:s5:-")
    p = c.model.sample(rng, 1)[0]
    assert max(dim5_structure(c, p).residuals.values()) < 1e-7


def test_wrong_dimension_raises():
    with pytest.raises(DimensionError):
        dim4_invariants(S5, np.zeros(5))
    with pytest.raises(DimensionError):
        dim5_structure(S4, np.zeros(4))
    with pytest.raises(DimensionError):
        dim2_det_check(S4, np.zeros(4))
