"""Model manifolds: frames, connections, curvature."""

import numpy as np
import pytest

from gkspin import ad
from gkspin.clifford import levi_civita
from gkspin.manifolds import (
    DegeneratePoint,
    FlatModel,
    connection,
    ellipsoid,
    gauss_riemann,
    geometry_at,
    paraboloid,
    s3_group_model,
    sphere_hypersurface,
    sphere_model,
)

MODELS = [sphere_hypersurface(3), sphere_model(4), ellipsoid([1.0, 1.3, 0.8]), paraboloid(3),
          s3_group_model(), FlatModel(2)]


METRIC_MODELS = [m for m in MODELS if not isinstance(m, type(s3_group_model()))]


@pytest.mark.parametrize("model", METRIC_MODELS, ids=lambda m: m.name)
def test_frame_is_orthonormal(model, rng):
    for x in model.sample(rng, 3):
        e = np.asarray(model.frame(x))
        np.testing.assert_allclose(e @ np.asarray(model.metric(x)) @ e.T, np.eye(model.n), atol=1e-12)


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.name)
def test_connection_is_metric(model, rng):
    x = model.sample(rng, 1)[0]
    conn = np.asarray(connection(model, x))
    np.testing.assert_allclose(conn, -conn.transpose(0, 2, 1), atol=1e-10)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_round_sphere_curvature(n, rng):
    model = sphere_hypersurface(n)
    for x in model.sample(rng, 3):
        geom = geometry_at(model, x)
        np.testing.assert_allclose(geom.curv_op, -np.eye(n * (n - 1) // 2), atol=1e-9)
        np.testing.assert_allclose(geom.ricci, (n - 1) * np.eye(n), atol=1e-9)
        np.testing.assert_allclose(geom.shape_op, np.eye(n), atol=1e-10)


def test_mirrored_sphere_flips_shape_operator(rng):
    model = sphere_hypersurface(3, mirrored=True)
    x = model.sample(rng, 1)[0]
    np.testing.assert_allclose(geometry_at(model, x).shape_op, -np.eye(3), atol=1e-10)


def test_s3_group_connection_is_constant(rng):
    model = s3_group_model()
    eps = levi_civita(3)
    for x in model.sample(rng, 3):
        conn = np.asarray(connection(model, x))
        np.testing.assert_allclose(np.abs(conn), eps * eps, atol=1e-10)
        geom = geometry_at(model, x)
        np.testing.assert_allclose(geom.curv_op, -np.eye(3), atol=1e-9)


@pytest.mark.parametrize("model", [ellipsoid([1.0, 1.3, 0.8]), ellipsoid([1.0, 1.2, 1.0, 0.9]),
                                   paraboloid(3)], ids=lambda m: m.name)
def test_gauss_equation(model, rng):
    for x in model.sample(rng, 3):
        geom = geometry_at(model, x)
        np.testing.assert_allclose(geom.riemann, gauss_riemann(geom.shape_op), atol=1e-8)


def test_shape_operator_matches_finite_differences(rng):
    model = ellipsoid([1.0, 1.3, 0.8])
    x = model.sample(rng, 1)[0]
    e = np.asarray(model.frame(x))
    t = np.asarray(model.tangents(x))
    h = 1e-6
    dnu = np.stack([(np.asarray(model.normal(x + h * v)) - np.asarray(model.normal(x - h * v))) / (2 * h)
                    for v in e])
    np.testing.assert_allclose(dnu @ t, geometry_at(model, x).shape_op, atol=1e-7)


def test_ellipsoid_gauss_curvature_closed_form(rng):
    a, b, c = 1.0, 1.3, 0.8
    model = ellipsoid([a, b, c])
    for x in model.sample(rng, 5):
        X, Y, Z = np.asarray(model.embedding(x))
        k = 1.0 / (a * b * c) ** 2 / (X**2 / a**4 + Y**2 / b**4 + Z**2 / c**4) ** 2
        geom = geometry_at(model, x)
        assert np.linalg.det(geom.shape_op) == pytest.approx(k, rel=1e-9)
        assert geom.scal / 2 == pytest.approx(k, rel=1e-7)


def test_paraboloid_vertex():
    geom = geometry_at(paraboloid(4), np.zeros(4))
    np.testing.assert_allclose(geom.shape_op, np.eye(4), atol=1e-12)


def test_degenerate_points_rejected():
    model = sphere_hypersurface(2)
    with pytest.raises(DegeneratePoint):
        model.validate(np.array([50.0, 0.0]))
    with pytest.raises(DegeneratePoint):
        model.validate(np.array([np.nan, 0.0]))
    with pytest.raises(ValueError):
        model.validate(np.zeros(3))


def test_sampling_is_seeded():
    model = ellipsoid([1.0, 1.3, 0.8])
    a = model.sample(np.random.default_rng(3), 4)
    b = model.sample(np.random.default_rng(3), 4)
    np.testing.assert_array_equal(np.array(a), np.array(b))


def test_flat_model_is_flat(rng):
    geom = geometry_at(FlatModel(3), rng.normal(size=3))
    assert np.abs(geom.riemann).max() == 0.0


def test_shape_operator_is_differentiable():
    model = sphere_hypersurface(2, r=2.0)
    d = ad.derivative(model.shape_operator, np.array([0.1, 0.2]), np.array([1.0, 0.0]))
    np.testing.assert_allclose(d, 0, atol=1e-10)
