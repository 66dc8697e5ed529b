"""Generalized Killing spinors: the equation nabla_X psi = A(X) . psi and
the tensors and identities that follow from it.

All quantities are frame components at a chart point.  For a vector field
``V`` and endomorphism field ``A`` the covariant derivatives are
``nabla_k V = e_k(V) + omega_k V`` and ``nabla_k A = e_k(A) + [omega_k, A]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import ad
from .clifford import CliffordRep, form_pairs, basis_form, spin_lift, wedge
from .manifolds import ChartModel, PointGeometry, frame_derivative, geometry_at
from .spin import cov_deriv_field, ricci_identity_residual, scal_identity_residual


@dataclass(frozen=True, eq=False)
class GKSCandidate:
    """A spinor field and a symmetric endomorphism field on a model.

    ``psi`` and ``endo`` are callables on chart points returning spinor
    coordinates and an ``n x n`` symmetric frame matrix.  ``psi`` is rescaled
    at construction so that ``|psi| = 1`` at the chart origin.
    """

    model: ChartModel
    rep: CliffordRep
    psi: object
    endo: object
    name: str = "candidate"
    conventions: dict = field(default_factory=dict)
    restriction: object = None

    def __post_init__(self):
        if self.rep.n != self.model.n:
            raise ValueError("representation and model dimensions differ")
        ref = np.zeros(self.model.n)
        norm = float(np.linalg.norm(self.psi(ref)))
        if norm == 0.0:
            raise ValueError("spinor vanishes at the reference point")
        if abs(norm - 1.0) > 1e-14:
            raw = self.psi
            object.__setattr__(self, "psi", lambda x: raw(x) / norm)

    @property
    def n(self) -> int:
        return self.model.n

    @property
    def einstein(self) -> float | None:
        return self.model.einstein

    def at(self, x) -> "PointEval":
        return PointEval(self, geometry_at(self.model, x))

    def with_endo(self, endo, name: str | None = None) -> "GKSCandidate":
        return GKSCandidate(self.model, self.rep, self.psi, endo, name or self.name,
                            dict(self.conventions))  # drops restriction data


@dataclass
class DerivedTensors:
    a: float
    da: np.ndarray
    divA: np.ndarray
    B: np.ndarray
    T: np.ndarray  # T[:, i, j] = T(e_i ^ e_j) = (nabla_i A) e_j - (nabla_j A) e_i
    TZ: np.ndarray  # TZ[z] = 2-form T^{e_z}


class PointEval:
    """Lazily computed numeric data of a candidate at one point."""

    def __init__(self, cand: GKSCandidate, geom: PointGeometry):
        self.cand = cand
        self.geom = geom
        self.x = geom.x
        self.n = cand.n
        self.rep = cand.rep
        self.g = cand.rep.gammas

    def vec(self, v) -> np.ndarray:
        return np.einsum("i,iab->ab", v, self.g)

    def form(self, sigma) -> np.ndarray:
        return self.rep.form_op(sigma)

    @cached_property
    def psi(self) -> np.ndarray:
        return np.asarray(self.cand.psi(self.x), dtype=float)

    @cached_property
    def nabla_fn(self):
        return cov_deriv_field(self.cand.model, self.rep, self.cand.psi)

    @cached_property
    def nabla(self) -> np.ndarray:
        """``nabla[k] = nabla_{e_k} psi``."""
        return np.asarray(self.nabla_fn(self.x))

    @cached_property
    def A(self) -> np.ndarray:
        return np.asarray(self.cand.endo(self.x), dtype=float)

    @cached_property
    def DA(self) -> np.ndarray:
        """``DA[k] = nabla_{e_k} A``."""
        raw = np.asarray(frame_derivative(self.cand.endo, self.cand.model, self.x, self.geom.frame))
        om = self.geom.omega
        return raw + om @ self.A - self.A @ om

    @cached_property
    def a(self) -> float:
        return float(np.trace(self.A))

    @cached_property
    def da(self) -> np.ndarray:
        return np.trace(self.DA, axis1=1, axis2=2)

    @cached_property
    def divA(self) -> np.ndarray:
        """``delta A = - sum_i (nabla_i A) e_i``."""
        return -np.einsum("iji->j", self.DA)

    @cached_property
    def B(self) -> np.ndarray:
        return self.A @ self.A - self.a * self.A + 0.25 * self.geom.ricci

    @cached_property
    def T(self) -> np.ndarray:
        cols = np.einsum("ikj->kij", self.DA)  # cols[:, i, j] = (nabla_i A) e_j
        return cols - cols.transpose(0, 2, 1)

    def T_of(self, sigma) -> np.ndarray:
        return 0.5 * np.einsum("kij,ij->k", self.T, sigma)

    def TZ(self, z) -> np.ndarray:
        """The 2-form ``sum_i e_i ^ (nabla_i A) z``."""
        cols = np.einsum("iab,b->ia", self.DA, z)
        return np.eye(self.n).T @ cols - cols.T

    def A_form(self, sigma) -> np.ndarray:
        """Action of A on 2-forms, ``A(X ^ Y) = AX ^ AY``."""
        return self.A @ sigma @ self.A.T

    def derived(self) -> DerivedTensors:
        eye = np.eye(self.n)
        return DerivedTensors(self.a, self.da, self.divA, self.B, self.T,
                              np.stack([self.TZ(eye[z]) for z in range(self.n)]))

    # second order ------------------------------------------------------------

    @cached_property
    def nabla2(self) -> np.ndarray:
        """``nabla2[a, b] = nabla_a`` applied to the field ``nabla_b psi``."""
        outer = cov_deriv_field(self.cand.model, self.rep, self.nabla_fn)
        return np.asarray(outer(self.x))

    @cached_property
    def hess_psi(self) -> np.ndarray:
        return self.nabla2 - np.einsum("abc,cd->abd", self.geom.conn, self.nabla)

    @cached_property
    def dirac(self) -> np.ndarray:
        return np.einsum("kab,kb->a", self.g, self.nabla)

    @cached_property
    def dirac2(self) -> np.ndarray:
        g, conn = self.g, self.geom.conn
        inner = np.einsum("bij,abj->ai", g, self.nabla2) + np.einsum(
            "abc,cij,bj->ai", conn, g, self.nabla)
        return np.einsum("aij,aj->i", g, inner)

    @cached_property
    def rough_laplacian(self) -> np.ndarray:
        """``nabla^* nabla psi``."""
        return -np.einsum("aad->d", self.hess_psi)


def gks_residual(c: GKSCandidate, p) -> float:
    """``max_k |nabla_k psi - A(e_k) . psi|``."""
    return gks_residual_at(c.at(p))


def gks_residual_at(ev: PointEval) -> float:
    rhs = np.einsum("ik,iab,b->ka", ev.A, ev.g, ev.psi)
    return float(np.max(np.linalg.norm(ev.nabla - rhs, axis=1)))


def dirac(c: GKSCandidate, p) -> np.ndarray:
    return c.at(p).dirac


def derived_tensors(c: GKSCandidate, p) -> DerivedTensors:
    return c.at(p).derived()


# identity residuals on a point evaluation -------------------------------------

def _norm(v) -> float:
    return float(np.linalg.norm(v))


def res_dirac(ev: PointEval) -> float:
    return _norm(ev.dirac + ev.a * ev.psi)


def res_norm_constancy(ev: PointEval) -> float:
    return float(np.max(np.abs(2 * ev.nabla @ ev.psi)))


def res_trace(ev: PointEval) -> float:
    lhs = np.einsum("iab,jbc,ji,c->a", ev.g, ev.g, ev.A, ev.psi)
    return _norm(lhs + ev.a * ev.psi)


def res_ricci(ev: PointEval) -> float:
    return ricci_identity_residual(ev.rep, ev.geom.riemann, ev.geom.ricci, ev.psi)


def res_scal(ev: PointEval) -> float:
    return scal_identity_residual(ev.rep, ev.geom.ricci, ev.psi)


def res_two(ev: PointEval) -> float:
    eye, out = np.eye(ev.n), 0.0
    ric, A, a = ev.geom.ricci, ev.A, ev.a
    for x in range(ev.n):
        lhs = ev.form(ev.TZ(eye[x])) @ ev.psi
        v = 0.5 * ric[:, x] + 2 * (A @ A)[:, x] - 2 * a * A[:, x]
        out = max(out, _norm(lhs - ev.vec(v) @ ev.psi))
    return out


def res_three1(ev: PointEval) -> float:
    return _norm(ev.divA + ev.da)


def res_three2(ev: PointEval) -> float:
    return abs(ev.geom.scal - 4 * ev.a**2 + 4 * np.trace(ev.A @ ev.A))


def res_curv2(ev: PointEval) -> float:
    out = 0.0
    for i, j in form_pairs(ev.n):
        sigma = basis_form(ev.n, i, j)
        lhs = ev.vec(ev.T_of(sigma)) @ ev.psi
        rhs = ev.form(0.5 * ev.geom.apply_curvature(sigma) + 2 * ev.A_form(sigma)) @ ev.psi
        out = max(out, _norm(lhs - rhs))
    return out


def res_two2(ev: PointEval) -> float:
    eye, out = np.eye(ev.n), 0.0
    for z in range(ev.n):
        lhs = ev.form(ev.TZ(eye[z])) @ ev.psi
        out = max(out, _norm(lhs - 2 * ev.vec(ev.B[:, z]) @ ev.psi))
    return out


def res_trace_B(ev: PointEval) -> float:
    return abs(float(np.trace(ev.B)))


def res_sc(ev: PointEval) -> float:
    """Scalar-curvature formula obtained from the Lichnerowicz formula."""
    a, psi = ev.a, ev.psi
    rhs = (a * a * psi - ev.vec(ev.da) @ psi - ev.vec(ev.divA) @ psi
           - np.trace(ev.A @ ev.A) * psi)
    return _norm(0.25 * ev.geom.scal * psi - rhs)


def res_lichnerowicz(ev: PointEval) -> float:
    """``D^2 psi - nabla^* nabla psi - scal/4 psi`` with second derivatives of psi."""
    return _norm(ev.dirac2 - ev.rough_laplacian - 0.25 * ev.geom.scal * ev.psi)


def res_dirac_square(ev: PointEval) -> float:
    return _norm(ev.dirac2 - ev.a**2 * ev.psi + ev.vec(ev.da) @ ev.psi)


def res_rough_laplacian(ev: PointEval) -> float:
    """``nabla^* nabla psi = delta A . psi + tr(A^2) psi`` for a GKS."""
    rhs = ev.vec(ev.divA) @ ev.psi + np.trace(ev.A @ ev.A) * ev.psi
    return _norm(ev.rough_laplacian - rhs)


def check_lemma_identities(c: GKSCandidate, p) -> dict[str, float]:
    ev = c.at(p)
    return {"two": res_two(ev), "three1": res_three1(ev), "three2": res_three2(ev)}


def check_curvature_identities(c: GKSCandidate, p) -> dict[str, float]:
    ev = c.at(p)
    return {"curv2": res_curv2(ev), "two2": res_two2(ev)}


def lichnerowicz_check(c: GKSCandidate, p) -> dict[str, float]:
    ev = c.at(p)
    return {"sc": res_sc(ev), "lichnerowicz": res_lichnerowicz(ev)}


# frame changes ------------------------------------------------------------------

class RotatedFrameModel(ChartModel):
    """Same manifold with the frame ``e'_a = sum_b rot[b, a] e_b``."""

    def __init__(self, base: ChartModel, rot: np.ndarray):
        super().__init__(base.n, base.name + "-rotated")
        self.base = base
        self.rot = np.asarray(rot, dtype=float)
        self.einstein = base.einstein
        self.box = base.box

    def frame(self, x):
        return self.rot.T @ self.base.frame(x)

    def validate(self, x) -> None:
        self.base.validate(x)


def rotate_frame(c: GKSCandidate, rot: np.ndarray) -> GKSCandidate:
    """Re-express a candidate in a frame rotated by the constant ``rot``."""
    lift = spin_lift(c.rep, rot)
    psi, endo = c.psi, c.endo
    return GKSCandidate(
        RotatedFrameModel(c.model, rot), c.rep,
        lambda x: lift.T @ psi(x),
        lambda x: rot.T @ endo(x) @ rot,
        c.name + "-rotated", dict(c.conventions),
    )
