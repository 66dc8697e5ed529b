"""Dimension-specific structure of generalized Killing spinors.

* dim 2: ``4 det A`` is the Gauss curvature.
* dim 4: the chiral split ``Psi = Psi+ + Psi-``, the function
  ``h = |Psi-|^2``, the vector fields ``eta`` and ``xi`` and the quantities
  built from them (derivatives of h and eta, the invariant ``C``, the
  self-dual block structure of the curvature).
* dim 5: the unit field ``xi`` with ``I Psi = xi . Psi`` for the volume
  complex structure ``I``, the endomorphism ``L`` and its relations.

Derivatives of ``h``, ``eta`` and ``xi`` are taken by automatic
differentiation of the fields themselves, never through the identities that
are being checked.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ad
from .clifford import contract, form_inner, quaternionic_triple, selfdual_bases, wedge
from .gks import GKSCandidate, PointEval
from .manifolds import frame_derivative

H_MARGIN = 1e-6  # h must lie in (H_MARGIN, 1 - H_MARGIN) for xi-dependent entries
SOLVE_MAX_COND = 1e8


class DimensionError(ValueError):
    """A dimension-specific routine was given a candidate of the wrong dimension."""


def _require_dim(c: GKSCandidate, n: int) -> None:
    if c.n != n:
        raise DimensionError(f"{c.name} has dimension {c.n}, expected {n}")


# dimension 2 -------------------------------------------------------------------------

def dim2_det_check(c: GKSCandidate, p) -> dict[str, float]:
    """``4 det A`` against the intrinsic Gauss curvature ``K = scal / 2``."""
    _require_dim(c, 2)
    ev = c.at(p)
    det4 = 4 * float(np.linalg.det(ev.A))
    gauss = 0.5 * ev.geom.scal
    return {"det4": det4, "gauss": gauss, "residual": abs(det4 - gauss)}


# dimension 4 -------------------------------------------------------------------------

def _vector_field_derivative(model, field, x, geom):
    """``N[k] = nabla_{e_k} V`` for a frame-component vector field ``V``."""
    raw = np.asarray(frame_derivative(field, model, x, geom.frame))
    return raw + np.einsum("kij,j->ki", geom.omega, np.asarray(field(x)))


@dataclass
class Dim4Record:
    h: float
    eta: np.ndarray
    xi: np.ndarray | None  # undefined where h is 0 or 1
    a1: float | None
    B_of_xi: np.ndarray | None
    C: float
    lam: float
    residuals: dict[str, float]


class Dim4Fields:
    """Chiral fields of a dim-4 candidate, as callables on chart points."""

    def __init__(self, c: GKSCandidate):
        _require_dim(c, 4)
        self.c = c
        self.p_plus, self.p_minus = c.rep.projectors
        self.g = c.rep.gammas

    def split(self, x):
        psi = self.c.psi(x)
        return self.p_plus @ psi, self.p_minus @ psi

    def h(self, x):
        _, minus = self.split(x)
        return minus @ minus

    def eta(self, x):
        """``g(eta, e_i) = <e_i . Psi+, Psi->``."""
        plus, minus = self.split(x)
        return ad.einsum("iab,b,a->i", self.g, plus, minus)


def _laplacian(model, fn, x, geom) -> float:
    """``Delta f = delta d f = -sum_a Hess f(e_a, e_a)`` by nested AD."""
    e = geom.frame

    def df(y):
        return frame_derivative(fn, model, y)

    d1 = np.asarray(df(x))
    d2 = np.asarray(frame_derivative(df, model, x, e))  # d2[a, b] = e_a(e_b f)
    hess = d2 - np.einsum("abc,c->ab", geom.conn, d1)
    return float(-np.trace(hess))


def dim4_invariants(c: GKSCandidate, p, ev: PointEval | None = None) -> Dim4Record:
    """All dim-4 quantities at ``p`` with the residuals of their relations.

    ``lam`` is ``scal / 4``, the Einstein constant when the model is
    Einstein; the Laplacian relation uses it through ``tr A^2 = a^2 - lam``.
    """
    fields = Dim4Fields(c)
    ev = c.at(p) if ev is None else ev
    x, geom, model = ev.x, ev.geom, c.model
    A, a = ev.A, ev.a
    lam = geom.scal / 4.0

    h = float(fields.h(x))
    eta = np.asarray(fields.eta(x))
    dh = np.asarray(frame_derivative(fields.h, model, x, geom.frame))
    N = _vector_field_derivative(model, fields.eta, x, geom)  # N[k] = nabla_k eta
    lap_h = _laplacian(model, fields.h, x, geom)

    one_2h = 1.0 - 2.0 * h
    res = {
        "eta_norm": abs(eta @ eta - (h - h * h)),
        "dh_i": float(np.linalg.norm(dh - 2 * A @ eta)),
        "dh_ii": float(np.max(np.linalg.norm(N - one_2h * A.T, axis=1))),
        "dh_iii_d": float(np.abs(N - N.T).max()),
        "dh_iii_delta": abs(-np.trace(N) + one_2h * a),
        "laplace_h": abs(lap_h + 2 * ev.da @ eta + 2 * (a * a - lam) * one_2h),
        # Delta(1 - 2h) = -2 Delta h
        "h_eigen": abs(-2 * lap_h - 4 * (a * a - lam) * one_2h),
    }

    l_val = 0.25 * float(dh @ dh)
    hh = h * (1 - h)
    C = hh**2 * (l_val - hh * lam / 12.0)

    xi = a1 = B_xi = None
    if H_MARGIN < h < 1 - H_MARGIN:
        plus, minus = (np.asarray(v) for v in fields.split(x))
        # Psi+ = xi . Psi-; {e_i . Psi-} is orthogonal with norms sqrt(h)
        xi = np.einsum("iab,b,a->i", fields.g, minus, plus) / h
        res["eta_xi"] = float(np.linalg.norm(eta + h * xi))
        res["xi_solve"] = float(np.linalg.norm(ev.vec(xi) @ minus - plus))
        B_xi = ev.B @ xi
        res["b_xi"] = float(np.max(np.abs(ev.B.T @ xi)))  # g(B(Z), xi) over frame Z
        a1 = float(xi @ A @ xi / (xi @ xi))
        res["a1_eigvec"] = float(np.linalg.norm(A @ xi - a1 * xi))
        res.update(_selfdual_and_T(ev, h, eta, xi, lam))
    return Dim4Record(h, eta, xi, a1, B_xi, float(C), lam, res)


def _selfdual_and_T(ev: PointEval, h, eta, xi, lam) -> dict[str, float]:
    """Relations that hold on Einstein dim-4 candidates where ``xi`` is defined."""
    plus, minus = selfdual_bases()
    e1 = xi / np.linalg.norm(xi)
    ab = 0.0
    for s in plus:
        for t in minus:
            val = form_inner(ev.A_form(s), t) + ev.B @ contract(s, e1) @ contract(t, e1)
            ab = max(ab, abs(val))
    eye, cort = np.eye(4), 0.0
    one_2h = 1.0 - 2.0 * h
    target = ev.A @ ev.A - ev.a * ev.A + 0.25 * lam * eye
    for y in range(4):
        lhs = ev.T_of(wedge(eta, eye[y]))
        cort = max(cort, float(np.linalg.norm(lhs - one_2h * target[:, y])))
    return {"ab": ab, "cort": cort}


def selfdual_block_residual(curv_op: np.ndarray) -> float:
    """Largest component of the curvature operator mixing Lambda^2+ and Lambda^2-.

    ``curv_op`` acts on 2-forms in the basis ``e_i ^ e_j`` (i < j).
    """
    plus, minus = selfdual_bases()
    pairs = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    vec = lambda s: np.array([s[i, j] for i, j in pairs])
    P = np.stack([vec(s) for s in plus])
    M = np.stack([vec(s) for s in minus])
    return float(np.abs(P @ curv_op @ M.T).max())


def dim4_selfdual_checks(c: GKSCandidate, p) -> dict[str, float]:
    """Self-dual block structure of the curvature, the mixed A/B orthogonality
    and the T(eta, .) formula."""
    ev = c.at(p)
    rec = dim4_invariants(c, p, ev)
    out = {"selfdual": selfdual_block_residual(ev.geom.curv_op)}
    for k in ("ab", "cort"):
        if k in rec.residuals:
            out[k] = rec.residuals[k]
    return out


# dimension 5 -------------------------------------------------------------------------

@dataclass
class Dim5Record:
    xi: np.ndarray
    L: np.ndarray
    alpha: float
    alphas: np.ndarray  # eigenvalues of A restricted to xi^perp
    residuals: dict[str, float]


class Dim5Fields:
    def __init__(self, c: GKSCandidate):
        _require_dim(c, 5)
        self.c = c
        self.g = c.rep.gammas
        self.I, self.J, self.K = quaternionic_triple(c.rep)

    def xi(self, x):
        """Least-squares ``xi`` with ``I Psi = xi . Psi``; exact for unit Psi."""
        psi = self.c.psi(x)
        cols = ad.einsum("iab,b->ia", self.g, psi)
        return ad.einsum("ia,ab,b->i", cols, self.I, psi) / (psi @ psi)


def _lstsq(cols: np.ndarray, rhs: np.ndarray) -> tuple[np.ndarray, float]:
    if np.linalg.cond(cols) > SOLVE_MAX_COND:
        raise np.linalg.LinAlgError("frame spinors are degenerate")
    sol, *_ = np.linalg.lstsq(cols, rhs, rcond=None)
    return sol, float(np.abs(cols @ sol - rhs).max())


def dim5_structure(c: GKSCandidate, p, ev: PointEval | None = None) -> Dim5Record:
    fields = Dim5Fields(c)
    ev = c.at(p) if ev is None else ev
    psi, g, I, J, K = ev.psi, fields.g, fields.I, fields.J, fields.K
    cols = np.einsum("iab,b->ai", g, psi)  # column i is e_i . psi

    xi, xi_solve = _lstsq(cols, I @ psi)
    rhs = np.einsum("jab,bc,c->aj", g, I, psi) + np.outer(psi, xi)
    L, l_solve = _lstsq(cols, rhs)  # X . I psi + g(X, xi) psi = LX . psi

    basis = np.column_stack([cols, psi, J @ psi, K @ psi])
    gram = basis.T @ basis
    eye = np.eye(5)
    res = {
        "xi_solve": xi_solve,
        "l_solve": l_solve,
        "deco": float(np.abs(gram - np.eye(8) * (psi @ psi)).max()),
        "xi_unit": abs(float(np.linalg.norm(xi)) - 1.0),
        "l_skew": float(np.abs(L + L.T).max()),
        "l_xi": float(np.linalg.norm(L @ xi)),
        "t1": float(np.abs(L @ L + eye - np.outer(xi, xi)).max()),
    }
    cl1 = 0.0
    for x in range(5):
        lhs = ev.form(wedge(xi, eye[x])) @ psi
        cl1 = max(cl1, float(np.linalg.norm(lhs + ev.vec(L[:, x]) @ psi)))
    res["cl1"] = cl1

    N = _vector_field_derivative(c.model, fields.xi, ev.x, ev.geom)  # N[k] = nabla_k xi
    res["nxi"] = float(np.max(np.linalg.norm(N - (2 * L @ ev.A).T, axis=1)))

    A = ev.A
    proj = eye - np.outer(xi, xi)
    alpha = float(xi @ A @ xi)
    res["zeta"] = float(np.linalg.norm(proj @ A @ xi))
    res["a2_d"] = float(np.abs(proj @ A @ A @ proj - 0.25 * proj).max())
    w, v = np.linalg.eigh(proj @ A @ proj)
    # the four eigenvectors of A|_D are those orthogonal to xi
    order = np.argsort(np.abs(v.T @ xi))
    alphas = np.sort(w[order[:4]])
    res["alpha"] = float(np.abs(alpha * alphas - 0.25).max())
    return Dim5Record(xi, L, alpha, alphas, res)
