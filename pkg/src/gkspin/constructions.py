"""Explicit generalized Killing spinors.

* Killing spinors on round spheres, obtained by restricting a constant spinor
  of the ambient Euclidean space, and on the group S^3 in its left-invariant
  frame.
* The restriction of a parallel spinor to any hypersurface, with ``A = II/2``.
* A non-Codazzi example on S^3: ``Psi = xi_1 . Phi`` for a Killing spinor
  ``Phi`` with constant ``+1/2``.

Every constructor checks its output at the chart origin and raises
:class:`ConstructionError` when the conventions do not line up.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import ad
from .clifford import CliffordRep, build_clifford_rep, induced_rep, spin_lift, spin_lift_near_identity
from .gks import GKSCandidate, gks_residual
from .manifolds import (
    ChartModel,
    Hypersurface,
    S3Group,
    ellipsoid,
    paraboloid,
    s3_group_model,
    sphere_hypersurface,
)

SELF_CHECK_TOL = 1e-9


class ConstructionError(RuntimeError):
    """A construction failed its own consistency check."""


@dataclass(frozen=True)
class RestrictionData:
    """How a restricted spinor is built from the ambient space."""

    ambient: CliffordRep
    embed: np.ndarray  # ambient spinor coords = embed @ hypersurface coords
    phi0: np.ndarray  # constant ambient spinor


def _self_check(c: GKSCandidate) -> GKSCandidate:
    res = gks_residual(c, np.zeros(c.n))
    if not res < SELF_CHECK_TOL:
        raise ConstructionError(f"{c.name}: residual {res:.3e} at the origin")
    return c


def _default_phi0(ambient: CliffordRep, embed: np.ndarray) -> np.ndarray:
    # first basis spinor of the module seen by the hypersurface
    return embed[:, 0].copy()


def restrict_parallel_spinor(surface: Hypersurface, phi0: np.ndarray | None = None,
                             chirality: int = 1, name: str | None = None,
                             check: bool = True) -> GKSCandidate:
    """Restriction of a constant spinor of ``R^(n+1)`` to ``surface``.

    In the frame trivialization the spinor is ``U^T S(x)^T phi0`` where
    ``S(x)`` lifts the ambient frame ``(e_1, ..., e_n, nu)`` to the spin group.
    The endomorphism is half the shape operator.
    """
    n = surface.n
    ambient = build_clifford_rep(n + 1)
    rep, embed = induced_rep(ambient, chirality)
    if phi0 is None:
        phi0 = _default_phi0(ambient, embed)
    phi0 = np.asarray(phi0, dtype=float)
    if phi0.shape != (ambient.d,):
        raise ValueError(f"ambient spinor must have length {ambient.d}")
    if np.linalg.norm(embed @ (embed.T @ phi0) - phi0) > 1e-12:
        raise ValueError("ambient spinor is not in the chosen half-spinor module")

    @lru_cache(maxsize=64)
    def base_lift(key: bytes):
        p = np.frombuffer(key, dtype=float)
        q = np.asarray(surface.ambient_frame(p), dtype=float)
        if np.linalg.det(q) < 0:
            raise ConstructionError(f"{surface.name}: ambient frame is not positive")
        return q, spin_lift(ambient, q)

    def psi(x):
        p = np.asarray(ad.primal(x), dtype=float)
        q_p, s_p = base_lift(p.tobytes())
        rel = q_p.T @ surface.ambient_frame(x)
        s = s_p @ spin_lift_near_identity(ambient, rel)
        return embed.T @ (s.T @ phi0)

    def endo(x):
        return 0.5 * surface.shape_operator(x)

    conv = {"construction": "restriction", "normal": "(e_1..e_n, nu) positive",
            "clifford_action": "X.psi := X.nu.psi"}
    c = GKSCandidate(surface, rep, psi, endo, name or f"restrict:{surface.name}", conv,
                     RestrictionData(ambient, embed, phi0))
    return _self_check(c) if check else c


# S^3 as a Lie group --------------------------------------------------------------

def _quaternion_lift(rep: CliffordRep):
    """``sigma(q) = q0 + q1 g2g3 + q2 g3g1 + q3 g1g2`` as a spinor operator."""
    g = rep.gammas
    basis = np.stack([np.eye(rep.d), g[1] @ g[2], g[2] @ g[0], g[0] @ g[1]])

    def sigma(q):
        return ad.einsum("k,kab->ab", q, basis)

    return sigma


def _s3_killing_field(model: S3Group, rep: CliffordRep, sign: int, phi0: np.ndarray):
    if sign < 0:
        # left-invariant spinors: nabla_X = -1/2 X. when the volume acts as +1
        return lambda x: phi0
    sigma = _quaternion_lift(rep)
    return lambda x: sigma(model.quaternion(x)).T @ phi0


def make_killing_spinor(model: ChartModel, sign: int, phi0: np.ndarray | None = None) -> GKSCandidate:
    """Killing spinor with ``nabla_X psi = (sign/2) X . psi`` on a unit sphere.

    ``model`` is a unit sphere hypersurface (its orientation is reversed for
    the negative sign) or the S^3 group model.
    """
    if sign not in (1, -1):
        raise ValueError("Killing sign must be +1 or -1")
    if isinstance(model, S3Group):
        rep = build_clifford_rep(3)
        if rep.volume_sign != 1:
            raise ConstructionError("expected the volume element to act as +1 on S^3")
        phi0 = np.eye(rep.d)[0] if phi0 is None else np.asarray(phi0, dtype=float)
        psi = _s3_killing_field(model, rep, sign, phi0)
        c = GKSCandidate(model, rep, psi, lambda x: 0.5 * sign * np.eye(3),
                         f"killing:s3group:{'+' if sign > 0 else '-'}",
                         {"construction": "killing", "killing_sign": sign,
                          "cl3_volume_sign": rep.volume_sign})
        return _self_check(c)
    if not isinstance(model, Hypersurface) or model.einstein is None:
        raise ValueError(f"no Killing spinor construction on {model.name}")
    surface = model
    if sign < 0:
        surface = sphere_hypersurface(model.n, mirrored=True)
    c = restrict_parallel_spinor(surface, phi0, check=False,
                                 name=f"killing:s{model.n}:{'+' if sign > 0 else '-'}")
    c.conventions.update({"construction": "killing", "killing_sign": sign})
    c = c.with_endo(lambda x: 0.5 * sign * np.eye(model.n))
    return _self_check(c)


S3_GKS_A = np.diag([0.5, -1.5, -1.5])


def make_s3_gks(phi0: np.ndarray | None = None) -> GKSCandidate:
    """``Psi = xi_1 . Phi`` on S^3 with ``A = -3/2 id + 2 xi_1 (x) xi_1``."""
    model = s3_group_model()
    killing = make_killing_spinor(model, 1, phi0)
    rep, phi = killing.rep, killing.psi
    g1 = rep.gammas[0]
    c = GKSCandidate(model, rep, lambda x: g1 @ phi(x), lambda x: S3_GKS_A,
                     "s3-gks", {"construction": "s3-gks", "killing_sign": 1,
                                "cl3_volume_sign": rep.volume_sign})
    return _self_check(c)


# named surfaces and candidates ----------------------------------------------------

SURFACES = {
    "sphere2": lambda: sphere_hypersurface(2),
    "sphere3": lambda: sphere_hypersurface(3),
    "sphere4": lambda: sphere_hypersurface(4),
    "sphere5": lambda: sphere_hypersurface(5),
    "ellipsoid2": lambda: ellipsoid([1.0, 1.0, 1.2]),
    "ellipsoid3": lambda: ellipsoid([1.0, 1.0, 1.0, 1.2]),
    "ellipsoid4": lambda: ellipsoid([1.0, 1.2, 1.0, 1.0, 0.9]),
    "paraboloid2": lambda: paraboloid(2),
    "paraboloid4": lambda: paraboloid(4),
}

MODELS = {
    "s3": lambda: sphere_hypersurface(3),
    "s4": lambda: sphere_hypersurface(4),
    "s5": lambda: sphere_hypersurface(5),
    "s3group": s3_group_model,
}

SHIPPED = ("s3-gks", "killing:s3:+", "killing:s4:+", "killing:s5:+",
           "restrict:ellipsoid3", "restrict:paraboloid4")


def surface_by_name(name: str) -> Hypersurface:
    try:
        return SURFACES[name]()
    except KeyError:
        raise KeyError(f"unknown surface {name!r}; known: {', '.join(SURFACES)}") from None


def construct(name: str) -> GKSCandidate:
    """Build a candidate from its name.

    ``s3-gks``, ``killing:<model>:<+|->`` or ``restrict:<surface>``.
    """
    if name == "s3-gks":
        return make_s3_gks()
    kind, _, rest = name.partition(":")
    if kind == "killing":
        model_name, _, sign = rest.partition(":")
        if model_name not in MODELS or sign not in ("+", "-"):
            raise KeyError(f"unknown Killing candidate {name!r}")
        return make_killing_spinor(MODELS[model_name](), 1 if sign == "+" else -1)
    if kind == "restrict":
        return restrict_parallel_spinor(surface_by_name(rest))
    raise KeyError(f"unknown construction {name!r}")
