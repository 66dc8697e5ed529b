"""Spin connection and spinor-bundle curvature in a frame trivialization.

A spinor field is a callable from chart points to spinor coordinates (shape
``(d,)``, or ``(m, d)`` for a stack of fields).  In the trivialization given by
the model's orthonormal frame,

    nabla_{e_k} psi = e_k(psi) + 1/2 sum_{i<j} conn[k, i, j] e_i . e_j . psi.
"""

from __future__ import annotations

import numpy as np

from . import ad
from .clifford import CliffordRep
from .manifolds import ChartModel, connection, frame_derivative


def spin_connection(rep: CliffordRep, conn):
    """Matrices ``S[k]`` with ``nabla_k = e_k + S[k]``."""
    return 0.25 * ad.einsum("kij,ijab->kab", conn, rep.pairs)


def cov_deriv_field(model: ChartModel, rep: CliffordRep, field):
    """Field ``x -> nabla psi(x)`` with the frame direction on axis 0."""

    def nabla(x):
        e = model.frame(x)
        s = spin_connection(rep, connection(model, x, e))
        return frame_derivative(field, model, x, e) + ad.einsum("kab,...b->k...a", s, field(x))

    return nabla


def spin_cov_deriv(model: ChartModel, rep: CliffordRep, field, k: int, p) -> np.ndarray:
    model.validate(p)
    return np.asarray(cov_deriv_field(model, rep, field)(np.asarray(p, dtype=float))[k])


def spin_curvature_commutator(model: ChartModel, rep: CliffordRep, p) -> np.ndarray:
    """``R^S[a, b] = [nabla_a, nabla_b] - nabla_[e_a, e_b]`` as spinor operators."""
    p = np.asarray(p, dtype=float)
    e = model.frame(p)
    conn = connection(model, p, e)
    s = spin_connection(rep, conn)
    ds = frame_derivative(lambda y: spin_connection(rep, connection(model, y)), model, p, e)
    comm = conn - conn.transpose(1, 0, 2)
    return (
        ds
        - ds.transpose(1, 0, 2, 3)
        + np.einsum("aij,bjk->abik", s, s)
        - np.einsum("bij,ajk->abik", s, s)
        - np.einsum("abc,cij->abij", comm, s)
    )


def curvature_of_spinor_bundle(rep: CliffordRep, riemann: np.ndarray, x, y) -> np.ndarray:
    """``R^S_{X,Y} = 1/2 R(X ^ Y) .`` from the Riemann tensor."""
    sigma = np.outer(x, y) - np.outer(y, x)
    return 0.5 * rep.form_op(0.5 * np.einsum("ab,abcd->cd", sigma, riemann))


def ricci_identity_residual(rep: CliffordRep, riemann: np.ndarray, ricci: np.ndarray, psi) -> float:
    """``max_X |Ric(X) . psi + 2 sum_i e_i . R^S_{X, e_i} psi|`` over frame X."""
    n, eye, out = rep.n, np.eye(rep.n), 0.0
    for x in range(n):
        acc = rep.vector_op(ricci[:, x]) @ psi
        for i in range(n):
            acc = acc + 2 * rep.gammas[i] @ curvature_of_spinor_bundle(rep, riemann, eye[x], eye[i]) @ psi
        out = max(out, float(np.linalg.norm(acc)))
    return out


def scal_identity_residual(rep: CliffordRep, ricci: np.ndarray, psi) -> float:
    """``|scal psi + sum_i e_i . Ric(e_i) . psi|``."""
    g = rep.gammas
    lhs = np.einsum("iab,jbc,ji,c->a", g, g, ricci, psi)
    return float(np.linalg.norm(np.trace(ricci) * psi + lhs))


def norm_derivative_residual(model: ChartModel, rep: CliffordRep, field, p) -> float:
    """``max_k |e_k(|psi|^2) - 2 <nabla_k psi, psi>|``; zero for a metric connection."""
    p = np.asarray(p, dtype=float)
    e = model.frame(p)
    dn = np.asarray(frame_derivative(lambda y: field(y) @ field(y), model, p, e))
    nab = np.asarray(cov_deriv_field(model, rep, field)(p))
    return float(np.abs(dn - 2 * nab @ np.asarray(field(p))).max())
