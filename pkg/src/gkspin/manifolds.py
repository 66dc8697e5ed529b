"""Frame-trivialized Riemannian models on a single chart.

Every model exposes ``frame(x)``: an ``n x n`` array whose row ``a`` holds the
chart components of the orthonormal frame vector ``e_a`` at chart point ``x``.
All geometric quantities are built from the frame by differentiation, and
every function here accepts Dual-valued points so that it can itself be
differentiated.

Conventions:
    conn[k, i, j] = g(nabla_{e_k} e_i, e_j)
    R[a, b, c, d] = g(R_{e_a, e_b} e_c, e_d),  R_{X,Y} = [nabla_X, nabla_Y] - nabla_[X,Y]
    curvature operator: g(R(e_a ^ e_b), e_c ^ e_d) = R[a, b, c, d]
With these the unit sphere has curvature operator minus the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import ad
from .clifford import form_pairs


class DegeneratePoint(ValueError):
    """A chart point where the frame or the immersion degenerates."""


class ChartModel:
    """Riemannian model on a chart of ``R^n``; subclasses supply the frame."""

    #: Einstein constant ``lambda`` with ``Ric = lambda g``, if the model is Einstein
    einstein: float | None = None
    #: sectional curvature when the model is a round sphere
    constant_curvature: float | None = None
    #: sampling box half-width in chart coordinates
    box: float = 1.5
    #: bound on chart coordinates accepted as interior points
    chart_radius: float = 10.0

    def __init__(self, n: int, name: str):
        self.n = n
        self.name = name

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name} n={self.n}>"

    def metric(self, x):
        raise NotImplementedError

    def frame(self, x):
        return gram_schmidt(self.metric(x))

    def validate(self, x) -> None:
        x = np.asarray(ad.primal(x))
        if x.shape != (self.n,):
            raise ValueError(f"chart point must have shape ({self.n},), got {x.shape}")
        if not np.all(np.isfinite(x)) or np.max(np.abs(x)) >= self.chart_radius:
            raise DegeneratePoint(f"{self.name}: point outside chart interior")

    def sample(self, rng: np.random.Generator, count: int) -> list[np.ndarray]:
        """Seeded uniform points in the sampling box, resampling rejects."""
        out = []
        while len(out) < count:
            x = rng.uniform(-self.box, self.box, self.n)
            try:
                self.validate(x)
            except DegeneratePoint:
                continue
            out.append(x)
        return out


def gram_schmidt(metric):
    """Orthonormalize the coordinate fields, in index order, for ``metric``.

    Returns the frame matrix ``E`` with ``E @ metric @ E.T = id``.
    """
    n = ad.shape(metric)[0]
    rows = []
    eye = np.eye(n)
    for k in range(n):
        w = eye[k]
        for u in rows:
            w = w - (u @ metric @ eye[k]) * u
        norm2 = w @ metric @ w
        if ad.primal(norm2) <= 1e-14:
            raise DegeneratePoint("Gram-Schmidt breakdown")
        rows.append(w / ad.sqrt(norm2))
    return ad.stack(rows)


class SphereModel(ChartModel):
    """Round sphere ``S^n(r)`` in the stereographic chart."""

    def __init__(self, n: int, r: float = 1.0):
        super().__init__(n, f"s{n}" if r == 1.0 else f"s{n}(r={r:g})")
        self.r = float(r)
        self.einstein = (n - 1) / self.r**2
        self.constant_curvature = 1.0 / self.r**2

    def metric(self, x):
        conf = 2 * self.r / (1 + x @ x)
        return conf * conf * np.eye(self.n)


def sphere_model(n: int, r: float = 1.0) -> SphereModel:
    if not 2 <= n <= 7 or r <= 0:
        raise ValueError("sphere model needs 2 <= n <= 7 and r > 0")
    return SphereModel(n, r)


class FlatModel(ChartModel):
    """Euclidean space with the standard frame."""

    einstein = 0.0

    def __init__(self, n: int):
        super().__init__(n, f"r{n}")

    def metric(self, x):
        return np.eye(self.n)

    def frame(self, x):
        return np.eye(self.n)


# S^3 as the group of unit quaternions ---------------------------------------

QUATERNION_UNITS = np.eye(4)[1:]


def qmul(p, q):
    """Quaternion product, components ordered (1, i, j, k)."""
    p0, p1, p2, p3 = (p[i] for i in range(4))
    q0, q1, q2, q3 = (q[i] for i in range(4))
    return ad.stack([
        p0 * q0 - p1 * q1 - p2 * q2 - p3 * q3,
        p0 * q1 + p1 * q0 + p2 * q3 - p3 * q2,
        p0 * q2 - p1 * q3 + p2 * q0 + p3 * q1,
        p0 * q3 + p1 * q2 - p2 * q1 + p3 * q0,
    ])


def stereographic_s3(x):
    """Unit quaternion for chart point ``x`` (x = 0 is the identity)."""
    s = x @ x
    return ad.concatenate([ad.stack([(1 - s) / (1 + s)]), 2 * x / (1 + s)])


class S3Group(ChartModel):
    """Unit S^3 with the left-invariant frame ``xi_a(q) = q u_a``.

    The frame satisfies ``nabla_{xi_1} xi_2 = xi_3`` and cyclically, and is
    taken as positively oriented.
    """

    einstein = 2.0
    constant_curvature = 1.0

    def __init__(self):
        super().__init__(3, "s3group")

    def quaternion(self, x):
        return stereographic_s3(x)

    def frame(self, x):
        q = stereographic_s3(x)
        jac = ad.jacobian(stereographic_s3, x)  # (3, 4): row mu is d q / d x_mu
        conf2 = (2 / (1 + x @ x)) ** 2
        xis = ad.stack([qmul(q, u) for u in QUATERNION_UNITS])
        return (xis @ jac.T) / conf2


def s3_group_model() -> S3Group:
    return S3Group()


# hypersurfaces ----------------------------------------------------------------

class Hypersurface(ChartModel):
    """Immersed hypersurface ``F: chart -> R^(n+1)``.

    The unit normal is chosen so that ``(e_1, ..., e_n, nu)`` is a positive
    frame of the ambient space.  ``shape_operator`` returns
    ``II[a, b] = <D_{e_a} nu, e_b>``, which is ``+id`` on a unit sphere whose
    positive normal points outward.
    """

    max_condition = 1e8

    def __init__(self, embedding, n: int, name: str, einstein: float | None = None,
                 box: float = 1.5):
        super().__init__(n, name)
        self.embedding = embedding
        self.einstein = einstein
        self.box = box

    def jacobian(self, x):
        """``(n+1, n)`` matrix of coordinate tangent vectors."""
        return ad.jacobian(self.embedding, x).T

    def metric(self, x):
        j = self.jacobian(x)
        return j.T @ j

    def validate(self, x) -> None:
        super().validate(x)
        j = self.jacobian(np.asarray(ad.primal(x), dtype=float))
        if np.linalg.cond(j) > self.max_condition:
            raise DegeneratePoint(f"{self.name}: Jacobian is rank deficient")

    def tangents(self, x):
        """Frame vectors as columns in ambient coordinates."""
        return self.jacobian(x) @ self.frame(x).T

    def normal(self, x, tangents=None):
        t = self.tangents(x) if tangents is None else tangents
        t0 = np.asarray(ad.primal(t))
        m = self.n + 1
        resid = np.eye(m) - t0 @ t0.T
        w = np.eye(m)[int(np.argmax(np.linalg.norm(resid, axis=0)))]
        nu = w - t @ (t.T @ w)
        nu = nu / ad.sqrt(nu @ nu)
        nu0 = np.asarray(ad.primal(nu))
        sign = np.sign(np.linalg.det(np.column_stack([t0, nu0])))
        return sign * nu

    def ambient_frame(self, x):
        """Rotation whose columns are ``e_1, ..., e_n, nu``."""
        t = self.tangents(x)
        return ad.concatenate([t, self.normal(x, t).reshape(-1, 1)], axis=1)

    def shape_operator(self, x):
        e = self.frame(x)
        dnu = ad.jvp(self.normal, x, e)
        return dnu @ self.tangents(x)


def hypersurface_model(embedding, n: int, name: str = "hypersurface", **kw) -> Hypersurface:
    return Hypersurface(embedding, n, name, **kw)


def sphere_embedding(n: int, r: float = 1.0, mirrored: bool = False):
    """Inverse stereographic parametrization of ``S^n(r)``.

    Positively oriented with the outward normal; ``mirrored`` reverses the
    orientation of the chart so that the positive normal points inward.
    """
    flip = np.ones(n)
    if mirrored:
        flip[0] = -1.0

    def emb(x):
        y = flip * x
        s = y @ y
        return r * ad.concatenate([2 * y, ad.stack([1 - s])]) / (1 + s)

    return emb


def sphere_hypersurface(n: int, r: float = 1.0, mirrored: bool = False) -> Hypersurface:
    name = f"s{n}" if r == 1.0 else f"s{n}(r={r:g})"
    model = Hypersurface(sphere_embedding(n, r, mirrored), n, name + ("-" if mirrored else ""),
                         einstein=(n - 1) / r**2)
    model.constant_curvature = 1.0 / r**2
    return model


def ellipsoid(axes) -> Hypersurface:
    """Ellipsoid with the given semi-axes, through a scaled sphere chart."""
    axes = np.asarray(axes, dtype=float)
    n = len(axes) - 1
    sph = sphere_embedding(n)
    name = "ellipsoid" + "x".join(f"{a:g}" for a in axes)
    return Hypersurface(lambda x: axes * sph(x), n, name)


def paraboloid(n: int) -> Hypersurface:
    """Graph of ``|x|^2 / 2`` over ``R^n``.

    The first two ambient axes are swapped so that the positive normal points
    to the convex side, making the shape operator ``+id`` at the vertex.
    """
    perm = np.arange(n)
    perm[[0, 1]] = perm[[1, 0]]

    def emb(x):
        return ad.concatenate([x[perm], ad.stack([0.5 * (x @ x)])])

    return Hypersurface(emb, n, f"paraboloid{n}", box=1.0)


# geometry -----------------------------------------------------------------------

def frame_derivative(f, model: ChartModel, x, frame=None):
    """``e_a(f)`` at ``x`` for every frame direction, stacked on axis 0."""
    e = model.frame(x) if frame is None else frame
    return ad.jvp(f, x, e)


def commutators(model: ChartModel, x, frame=None):
    """``C[a, b, c]``: frame components of ``[e_a, e_b]``."""
    e = model.frame(x) if frame is None else frame
    de = frame_derivative(model.frame, model, x, e)  # de[a, b, mu] = e_a(E[b, mu])
    comm = de - de.transpose(1, 0, 2)
    coframe = ad.inv(e.T)
    return ad.einsum("cm,abm->abc", coframe, comm)


def connection(model: ChartModel, x, frame=None):
    """Levi-Civita coefficients ``conn[k, i, j] = g(nabla_k e_i, e_j)`` (Koszul)."""
    c = commutators(model, x, frame)
    # c.transpose(2, 0, 1)[a, b, k] = c[b, k, a]
    return 0.5 * (c - c.transpose(2, 0, 1) + c.transpose(1, 2, 0))


def connection_matrices(conn):
    """``omega[k]`` acting on frame components: ``nabla_k V = e_k(V) + omega[k] V``."""
    return conn.transpose(0, 2, 1)


def riemann(model: ChartModel, x):
    """Riemann tensor ``R[a, b, c, d]`` at ``x``."""
    e = model.frame(x)
    conn = connection(model, x, e)
    dconn = frame_derivative(lambda y: connection(model, y), model, x, e)
    om = connection_matrices(conn)
    dom = dconn.transpose(0, 1, 3, 2)  # dom[a, b] = e_a(omega_b)
    comm = conn - conn.transpose(1, 0, 2)  # [e_a, e_b] by torsion-freeness
    big = (
        dom
        - dom.transpose(1, 0, 2, 3)
        + ad.einsum("aij,bjk->abik", om, om)
        - ad.einsum("bij,ajk->abik", om, om)
        - ad.einsum("abc,cij->abij", comm, om)
    )
    return big.transpose(0, 1, 3, 2)


def ricci_from_riemann(rm):
    return ad.einsum("abca->bc", rm)


def curvature_operator_matrix(rm) -> np.ndarray:
    """Matrix of the curvature operator on the basis ``e_i ^ e_j`` (i < j)."""
    n = rm.shape[0]
    pairs = form_pairs(n)
    return np.array([[rm[a, b, c, d] for (c, d) in pairs] for (a, b) in pairs])


def apply_curvature(rm, sigma):
    """Curvature operator applied to a 2-form."""
    return 0.5 * ad.einsum("ab,abcd->cd", sigma, rm)


def gauss_riemann(shape_op):
    """Riemann tensor of a Euclidean hypersurface from its shape operator."""
    s = shape_op
    return np.einsum("bc,ad->abcd", s, s) - np.einsum("ac,bd->abcd", s, s)


@dataclass
class PointGeometry:
    """Numeric geometry of a model at one chart point."""

    model: ChartModel
    x: np.ndarray

    @cached_property
    def frame(self) -> np.ndarray:
        return np.asarray(self.model.frame(self.x))

    @cached_property
    def conn(self) -> np.ndarray:
        return np.asarray(connection(self.model, self.x, self.frame))

    @cached_property
    def omega(self) -> np.ndarray:
        return connection_matrices(self.conn)

    @cached_property
    def riemann(self) -> np.ndarray:
        return np.asarray(riemann(self.model, self.x))

    @cached_property
    def ricci(self) -> np.ndarray:
        return ricci_from_riemann(self.riemann)

    @cached_property
    def scal(self) -> float:
        return float(np.trace(self.ricci))

    @cached_property
    def curv_op(self) -> np.ndarray:
        return curvature_operator_matrix(self.riemann)

    def apply_curvature(self, sigma):
        return apply_curvature(self.riemann, sigma)

    @cached_property
    def shape_op(self) -> np.ndarray | None:
        if not isinstance(self.model, Hypersurface):
            return None
        return np.asarray(self.model.shape_operator(self.x))


def geometry_at(model: ChartModel, x) -> PointGeometry:
    model.validate(x)
    return PointGeometry(model, np.asarray(x, dtype=float))
