"""Registry of verification checks and the suite runner.

A check evaluates one residual per sample (a random algebraic input, a chart
point of a model, or a chart point of a candidate) and aggregates them:

* ``max``: the largest residual, passing when it is at most the tolerance;
* ``std``: the sample standard deviation (used for quantities that must be
  constant);
* ``fraction``: the fraction of samples where a per-sample indicator is 1.

A per-sample value of ``None`` means the check does not apply at that sample.
A check with no applicable samples gets the verdict ``inapplicable``.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from . import gks
from .clifford import (
    CliffordRep,
    build_clifford_rep,
    form_pairs,
    hodge3,
    quaternionic_triple,
    trace_identity_residual,
    wedge,
)
from .constructions import SHIPPED, construct, surface_by_name
from .dims import Dim5Fields, dim2_det_check, dim4_invariants, dim5_structure, selfdual_block_residual
from .manifolds import (
    ChartModel,
    Hypersurface,
    curvature_operator_matrix,
    gauss_riemann,
    geometry_at,
    s3_group_model,
    sphere_hypersurface,
    sphere_model,
)
from .spin import (
    curvature_of_spinor_bundle,
    norm_derivative_residual,
    ricci_identity_residual,
    scal_identity_residual,
    spin_curvature_commutator,
)

PLUMBING = "plumbing"


@dataclass(frozen=True)
class Check:
    id: str
    module: str
    anchor: str
    tol: float
    kind: str  # "clifford", "model" or "candidate"
    func: Callable
    aggregate: str = "max"
    gated: bool = True  # candidate checks: skip points failing the GKS equation
    applies: Callable | None = None  # target-level predicate


REGISTRY: dict[str, Check] = {}


def register(id, module, anchor, tol, kind, aggregate="max", gated=True, applies=None):
    def deco(func):
        if id in REGISTRY:
            raise ValueError(f"duplicate check id {id}")
        REGISTRY[id] = Check(id, module, anchor, tol, kind, func, aggregate, gated, applies)
        return func

    return deco


# samples ------------------------------------------------------------------------------

class CliffordSample:
    """Random algebraic inputs for one representation."""

    def __init__(self, rep: CliffordRep, rng: np.random.Generator):
        n, d = rep.n, rep.d
        self.rep = rep
        self.x = rng.standard_normal(n)
        self.y = rng.standard_normal(n)
        self.psi = rng.standard_normal(d)
        self.phi = rng.standard_normal(d)
        m = rng.standard_normal((n, n))
        self.sym = m + m.T
        self.sigma = m - m.T


class ModelPoint:
    def __init__(self, model: ChartModel, x: np.ndarray, rng: np.random.Generator):
        self.model = model
        self.x = x
        self.geom = geometry_at(model, x)
        self.rep = build_clifford_rep(model.n)
        d, n = self.rep.d, model.n
        psi0, psi1 = rng.standard_normal(d), rng.standard_normal(d)
        lin = rng.standard_normal((d, n))
        self.field = lambda y: psi0 + lin @ y + (y @ y) * psi1
        self.psi = psi0 + lin @ x + (x @ x) * psi1


class CandidatePoint:
    """A candidate at a chart point with lazily computed analyses."""

    def __init__(self, cand: gks.GKSCandidate, x: np.ndarray, gks_tol: float):
        self.cand = cand
        self.x = x
        self.ev = cand.at(x)
        self.gks_tol = gks_tol

    @cached_property
    def gks(self) -> float:
        return gks.gks_residual_at(self.ev)

    @property
    def valid(self) -> bool:
        return self.gks <= self.gks_tol

    @cached_property
    def dim4(self):
        return dim4_invariants(self.cand, self.x, self.ev)

    @cached_property
    def dim5(self):
        return dim5_structure(self.cand, self.x, self.ev)

    @cached_property
    def dim2(self):
        return dim2_det_check(self.cand, self.x)


def _einstein(target) -> bool:
    model = getattr(target, "model", target)
    return model.einstein is not None


def _dim(n):
    return lambda target: target.n == n


def _einstein_dim(n):
    return lambda target: target.n == n and _einstein(target)


def _unit_sphere_dim(n):
    def pred(target):
        model = getattr(target, "model", target)
        return model.n == n and model.constant_curvature == 1.0

    return pred


def _restriction(target) -> bool:
    return getattr(target, "restriction", None) is not None


def _is_hypersurface(target) -> bool:
    return isinstance(target, Hypersurface)


# clifford checks ---------------------------------------------------------------------

@register("clifford_relation", "clifford_core", "X.X = -|X|^2", 1e-12, "clifford")
def _c_relation(s: CliffordSample):
    rep = s.rep
    vx = rep.vector_op(s.x)
    return float(np.abs(vx @ vx + (s.x @ s.x) * rep.identity).max() / max(1.0, s.x @ s.x))


@register("skew", "clifford_core", "skew-symmetric with respect to", 1e-12, "clifford")
def _c_skew(s: CliffordSample):
    vx = s.rep.vector_op(s.x)
    return abs(float((vx @ s.psi) @ s.phi + s.psi @ (vx @ s.phi))) / (
        np.linalg.norm(s.x) * np.linalg.norm(s.psi) * np.linalg.norm(s.phi))


@register("two_form", "clifford_core", "Clifford multiplication with 2-forms", 1e-12, "clifford")
def _c_two_form(s: CliffordSample):
    rep = s.rep
    lhs = rep.form_op(wedge(s.x, s.y)) @ s.psi
    rhs = rep.vector_op(s.x) @ rep.vector_op(s.y) @ s.psi + (s.x @ s.y) * s.psi
    scale = np.linalg.norm(s.x) * np.linalg.norm(s.y) * np.linalg.norm(s.psi)
    return float(np.linalg.norm(lhs - rhs) / scale)


@register("trace", "clifford_core", "a local orthonormal frame, then", 1e-12, "clifford")
def _c_trace(s: CliffordSample):
    scale = np.abs(s.sym).max() * np.linalg.norm(s.psi)
    return trace_identity_residual(s.rep, s.sym, s.psi) / scale


@register("volume3", "clifford_core", "volume form on the spin bundle", 1e-12, "clifford",
          applies=_dim(3))
def _c_volume3(s: CliffordSample):
    """``omega . psi = -eps (*omega) . psi`` in dimension 3."""
    rep = s.rep
    lhs = rep.form_op(s.sigma) @ s.psi
    rhs = -rep.volume_sign * rep.vector_op(hodge3(s.sigma)) @ s.psi
    return float(np.linalg.norm(lhs - rhs) / (np.abs(s.sigma).max() * np.linalg.norm(s.psi)))


@register("chirality", "clifford_core", "Correspondingly, Ψ splits as", 1e-12, "clifford",
          applies=lambda rep: rep.n % 2 == 0)
def _c_chirality(s: CliffordSample):
    rep = s.rep
    plus, minus = rep.projectors
    f, v = rep.form_op(s.sigma), rep.vector_op(s.x)
    return float(max(np.abs(plus @ f - f @ plus).max(), np.abs(plus @ v - v @ minus).max()))


@register("quaternionic", "clifford_core", "carries a quaternionic structure", 1e-12, "clifford",
          applies=_dim(5))
def _c_quaternionic(s: CliffordSample):
    i, j, k = quaternionic_triple(s.rep)
    v = s.rep.vector_op(s.x)
    eye = s.rep.identity
    errs = [np.abs(i @ j + j @ i).max(), np.abs(k - i @ j).max(),
            np.abs(i @ v - v @ i).max(), np.abs(j @ v + v @ j).max(), np.abs(k @ v + v @ k).max()]
    errs += [np.abs(op @ op + eye).max() for op in (i, j, k)]
    return float(max(errs) / max(1.0, np.abs(s.x).max()))


# model checks --------------------------------------------------------------------------

@register("metric_compat", "manifold_models", PLUMBING, 1e-10, "model")
def _m_metric(s: ModelPoint):
    conn = s.geom.conn
    return float(np.abs(conn + conn.transpose(0, 2, 1)).max())


@register("gauss_eq", "manifold_models", "equal to half the second fundamental form", 1e-6, "model",
          applies=_is_hypersurface)
def _m_gauss(s: ModelPoint):
    ext = curvature_operator_matrix(gauss_riemann(s.geom.shape_op))
    return float(np.abs(s.geom.curv_op - ext).max())


@register("sphere_curv", "manifold_models", "minus the identity", 1e-8, "model",
          applies=lambda m: m.constant_curvature is not None)
def _m_sphere(s: ModelPoint):
    k = s.model.constant_curvature
    return float(np.abs(s.geom.curv_op + k * np.eye(len(s.geom.curv_op))).max())


@register("einstein", "manifold_models", "with λ = scal/4", 1e-8, "model", applies=_einstein)
def _m_einstein(s: ModelPoint):
    return float(np.abs(s.geom.ricci - s.model.einstein * np.eye(s.model.n)).max())


@register("spin_metric", "manifold_models", PLUMBING, 1e-8, "model")
def _m_spin_metric(s: ModelPoint):
    return norm_derivative_residual(s.model, s.rep, s.field, s.x)


@register("curv0", "manifold_models", "curvature of the spinor bundle", 1e-7, "model")
def _m_curv0(s: ModelPoint):
    comm = spin_curvature_commutator(s.model, s.rep, s.x)
    eye, out = np.eye(s.model.n), 0.0
    for a, b in form_pairs(s.model.n):
        ref = curvature_of_spinor_bundle(s.rep, s.geom.riemann, eye[a], eye[b])
        out = max(out, float(np.abs(comm[a, b] - ref).max()))
    return out


@register("ricci", "manifold_models", "yields the well-known formula", 1e-7, "model")
def _m_ricci(s: ModelPoint):
    return ricci_identity_residual(s.rep, s.geom.riemann, s.geom.ricci, s.psi) / np.linalg.norm(s.psi)


@register("scal", "manifold_models", "which together with", 1e-7, "model")
def _m_scal(s: ModelPoint):
    return scal_identity_residual(s.rep, s.geom.ricci, s.psi) / np.linalg.norm(s.psi)


# candidate checks: the GKS equation and its consequences -------------------------------

@register("gks", "gks_core", "some symmetric endomorphism field", 1e-8, "candidate", gated=False)
def _g_gks(s: CandidatePoint):
    return s.gks


@register("symmetric_a", "gks_core", "some symmetric endomorphism field", 1e-12, "candidate",
          gated=False)
def _g_sym(s: CandidatePoint):
    return float(np.abs(s.ev.A - s.ev.A.T).max())


@register("norm", "gks_core", "norm of Ψ is constant", 1e-7, "candidate")
def _g_norm(s: CandidatePoint):
    return gks.res_norm_constancy(s.ev)


@register("dirac", "gks_core", "where D denotes the Dirac operator", 1e-6, "candidate", gated=False)
def _g_dirac(s: CandidatePoint):
    return gks.res_dirac(s.ev)


@register("trace_a", "gks_core", "a local orthonormal frame, then", 1e-10, "candidate", gated=False)
def _g_trace(s: CandidatePoint):
    return gks.res_trace(s.ev)


@register("two", "gks_core", "denotes the divergence of A", 1e-6, "candidate")
def _g_two(s: CandidatePoint):
    return gks.res_two(s.ev)


@register("three1", "gks_core", "denotes the divergence of A", 1e-6, "candidate")
def _g_three1(s: CandidatePoint):
    return gks.res_three1(s.ev)


@register("three2", "gks_core", "denotes the divergence of A", 1e-7, "candidate")
def _g_three2(s: CandidatePoint):
    return gks.res_three2(s.ev)


@register("scal_value", "gks_core", "denotes the divergence of A", 1e-7, "candidate",
          applies=_einstein)
def _g_scal_value(s: CandidatePoint):
    """``4a^2 - 4 tr A^2`` against the model's scalar curvature ``n lambda``."""
    A = s.ev.A
    return abs(4 * s.ev.a**2 - 4 * np.trace(A @ A) - s.cand.n * s.cand.einstein)


@register("trace_b", "gks_core", "Note that B is traceless", 1e-7, "candidate", applies=_einstein)
def _g_trace_b(s: CandidatePoint):
    return gks.res_trace_B(s.ev)


@register("curv2", "gks_core", "an arbitrary 2-form and", 1e-6, "candidate")
def _g_curv2(s: CandidatePoint):
    return gks.res_curv2(s.ev)


@register("two2", "gks_core", "an arbitrary 2-form and", 1e-6, "candidate")
def _g_two2(s: CandidatePoint):
    return gks.res_two2(s.ev)


@register("sc", "gks_core", "the Lichnerowicz formula implies", 1e-6, "candidate")
def _g_sc(s: CandidatePoint):
    return gks.res_sc(s.ev)


@register("lichnerowicz", "gks_core", "the Lichnerowicz formula implies", 1e-4, "candidate")
def _g_lich(s: CandidatePoint):
    return gks.res_lichnerowicz(s.ev)


@register("dirac_square", "gks_core", "where D denotes the Dirac operator", 1e-4, "candidate")
def _g_dirac_square(s: CandidatePoint):
    return gks.res_dirac_square(s.ev)


# candidate checks: constructions ---------------------------------------------------------

def _is_s3_gks(c) -> bool:
    return c.conventions.get("construction") == "s3-gks"


@register("s3_eigen", "constructions", "corresponding to the symmetric endomorphism", 1e-8,
          "candidate", gated=False, applies=_is_s3_gks)
def _s_eigen(s: CandidatePoint):
    w = np.linalg.eigvalsh(s.ev.A)
    return float(np.abs(w - np.array([-1.5, -1.5, 0.5])).max())


CODAZZI_THRESHOLD = 0.1


@register("codazzi", "constructions", "not a Codazzi tensor", 0.05, "candidate",
          aggregate="fraction", applies=_is_s3_gks)
def _s_codazzi(s: CandidatePoint):
    """Indicator of a small Codazzi defect ``|(nabla_2 A) e_3 - (nabla_3 A) e_2|``."""
    return float(np.linalg.norm(s.ev.T[:, 1, 2]) <= CODAZZI_THRESHOLD)


@register("half_ii", "constructions", "equal to half the second fundamental form", 1e-8,
          "candidate", gated=False, applies=_restriction)
def _h_half_ii(s: CandidatePoint):
    return float(np.abs(s.ev.A - 0.5 * s.ev.geom.shape_op).max())


@register("recover_a", "constructions", "equal to half the second fundamental form", 1e-5,
          "candidate", applies=_restriction)
def _h_recover(s: CandidatePoint):
    """Least-squares solve of ``nabla_k psi = A'(e_k) . psi`` against ``II / 2``."""
    ev = s.ev
    cols = np.einsum("iab,b->ai", ev.g, ev.psi)
    sol, *_ = np.linalg.lstsq(cols, ev.nabla.T, rcond=None)
    return float(np.abs(sol - 0.5 * ev.geom.shape_op).max())


# candidate checks: dimensions 2, 4, 5 ------------------------------------------------------

@register("det_gauss", "dim_analysis", "Gauss' Theorema Egregium", 1e-5, "candidate",
          applies=_dim(2))
def _d2(s: CandidatePoint):
    return s.dim2["residual"]


def _d4(key):
    def f(s: CandidatePoint):
        return s.dim4.residuals.get(key)

    return f


_DIM4 = [
    ("eta_norm", "1 = |Ψ|^2", 1e-7, _dim(4)),
    ("eta_xi", "the vector field on M_0", 1e-7, _dim(4)),
    ("dh_i", "(1 - 2h)A(X)", 1e-6, _dim(4)),
    ("dh_ii", "(1 - 2h)A(X)", 1e-6, _dim(4)),
    ("dh_iii_d", "(1 - 2h)A(X)", 1e-6, _dim(4)),
    ("dh_iii_delta", "(1 - 2h)A(X)", 1e-6, _dim(4)),
    ("laplace_h", "Straightforward calculation using", 1e-4, _dim(4)),
    ("h_eigen", "Straightforward calculation using", 1e-4, _einstein_dim(4)),
    ("b_xi", "a 2-form and X", 1e-6, _einstein_dim(4)),
    ("a1_eigvec", "to show that A(e_1) = a_1 e_1", 1e-6, _einstein_dim(4)),
    ("ab", "the curvature operator preserves", 1e-6, _einstein_dim(4)),
    ("cort", "the second summand vanishes", 1e-6, _einstein_dim(4)),
]
for _key, _anchor, _tol, _pred in _DIM4:
    register(_key, "dim_analysis", _anchor, _tol, "candidate", applies=_pred)(_d4(_key))


@register("selfdual", "dim_analysis", "the curvature operator preserves", 1e-8, "candidate",
          gated=False, applies=_einstein_dim(4))
def _d4_selfdual(s: CandidatePoint):
    return selfdual_block_residual(s.ev.geom.curv_op)


@register("c_zero", "dim_analysis", "is constant on M", 1e-6, "candidate", applies=_einstein_dim(4))
def _d4_c(s: CandidatePoint):
    return abs(s.dim4.C)


@register("c_const", "dim_analysis", "is constant on M", 1e-6, "candidate", aggregate="std",
          applies=_dim(4))
def _d4_cstd(s: CandidatePoint):
    return s.dim4.C


def _d5(key):
    def f(s: CandidatePoint):
        return s.dim5.residuals[key]

    return f


_DIM5 = [
    ("deco", "orthogonal direct sum decomposition", 1e-8, _dim(5)),
    ("xi_unit", "a unit vector field", 1e-8, _dim(5)),
    ("xi_solve", "a unit vector field", 1e-8, _dim(5)),
    ("l_solve", "explicit the Clifford product", 1e-8, _dim(5)),
    ("l_skew", "complex structure on D", 1e-8, _dim(5)),
    ("t1", "complex structure on D", 1e-7, _dim(5)),
    ("cl1", "explicit the Clifford product", 1e-7, _dim(5)),
    ("nxi", "thus ξ is a Killing vector field", 1e-6, _dim(5)),
    ("zeta", "so D is left invariant by A", 1e-6, _unit_sphere_dim(5)),
    ("a2_d", "the restriction of 4A^2 to D is the identity", 1e-8, _unit_sphere_dim(5)),
    ("alpha", "αα₁ = 1/4", 1e-8, _unit_sphere_dim(5)),
]
for _key, _anchor, _tol, _pred in _DIM5:
    register(_key, "dim_analysis", _anchor, _tol, "candidate", applies=_pred)(_d5(_key))


# suites -----------------------------------------------------------------------------------

MODEL_FACTORIES = {
    "s3group": s3_group_model,
    "s4conformal": lambda: sphere_model(4),
    "s4": lambda: sphere_hypersurface(4),
    "ellipsoid3": lambda: surface_by_name("ellipsoid3"),
    "paraboloid4": lambda: surface_by_name("paraboloid4"),
}

_IDENTITY_IDS = ["gks", "symmetric_a", "norm", "dirac", "trace_a", "two", "three1", "three2",
                 "scal_value", "trace_b", "curv2", "two2", "sc", "lichnerowicz", "dirac_square"]


@dataclass(frozen=True)
class Suite:
    name: str
    kind: str
    check_ids: tuple[str, ...]
    targets: tuple[str, ...]
    dim: int | None = None  # required dimension for --model overrides
    fixed_model: bool = False  # --model must be one of the default targets


SUITES = {
    "clifford": Suite("clifford", "clifford",
                      tuple(i for i, c in REGISTRY.items() if c.kind == "clifford"),
                      tuple(str(n) for n in range(2, 9))),
    "models": Suite("models", "model",
                    tuple(i for i, c in REGISTRY.items() if c.kind == "model"),
                    tuple(MODEL_FACTORIES)),
    "s3": Suite("s3", "candidate",
                ("gks", "s3_eigen", "codazzi", "dirac", "three1", "three2", "scal_value", "trace_b"),
                ("s3-gks",), fixed_model=True),
    "hypersurface": Suite("hypersurface", "candidate",
                          ("gks", "half_ii", "recover_a", "norm", "three1", "three2"),
                          ("restrict:ellipsoid2", "restrict:ellipsoid3", "restrict:paraboloid4")),
    "dim2": Suite("dim2", "candidate", ("gks", "det_gauss"),
                  ("restrict:sphere2", "restrict:ellipsoid2"), dim=2),
    "dim4": Suite("dim4", "candidate",
                  ("gks",) + tuple(k for k, *_ in _DIM4) + ("selfdual", "c_zero", "c_const"),
                  ("killing:s4:+",), dim=4),
    "dim5": Suite("dim5", "candidate", ("gks",) + tuple(k for k, *_ in _DIM5),
                  ("killing:s5:+",), dim=5),
    "identities": Suite("identities", "candidate", tuple(_IDENTITY_IDS), SHIPPED),
}
SUITE_NAMES = tuple(SUITES) + ("all",)


class UsageError(ValueError):
    """Invalid suite configuration (exit status 2)."""


@dataclass
class SuiteConfig:
    suite: str
    model: str | None = None
    samples: int = 100
    seed: int = 0
    tolerances: dict[str, float] = field(default_factory=dict)

    def validate(self) -> None:
        if self.suite not in SUITE_NAMES:
            raise UsageError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITE_NAMES)}")
        if self.samples < 1:
            raise UsageError("sample count must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise UsageError("seed must be a 64-bit unsigned integer")
        for key in self.tolerances:
            if key not in REGISTRY:
                raise UsageError(f"unknown check id {key!r} in tolerance override")
        if self.model is not None and self.suite == "all":
            raise UsageError("--model cannot be combined with the 'all' suite")

    def tol(self, check_id: str) -> float:
        return self.tolerances.get(check_id, REGISTRY[check_id].tol)


def _rng(seed: int, *keys: str) -> np.random.Generator:
    words = [seed & 0xFFFFFFFF, seed >> 32] + [zlib.crc32(k.encode()) for k in keys]
    return np.random.default_rng(words)


def _targets(suite: Suite, cfg: SuiteConfig) -> list[str]:
    if cfg.model is None:
        return list(suite.targets)
    if suite.fixed_model and cfg.model not in suite.targets:
        raise UsageError(f"suite {suite.name} only runs on {', '.join(suite.targets)}")
    if suite.kind == "model" and cfg.model not in MODEL_FACTORIES:
        raise UsageError(f"unknown model {cfg.model!r}; choose from {', '.join(MODEL_FACTORIES)}")
    if suite.kind == "clifford" and cfg.model not in suite.targets:
        raise UsageError("clifford suite takes --model 2..8")
    return [cfg.model]


def _build_candidate(name: str, suite: Suite) -> gks.GKSCandidate:
    try:
        cand = construct(name)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    if suite.dim is not None and cand.n != suite.dim:
        raise UsageError(f"suite {suite.name} needs dimension {suite.dim}; "
                         f"{name} has dimension {cand.n}")
    return cand


def _aggregate(kind: str, values: list[float]) -> float:
    arr = np.asarray(values, dtype=float)
    if kind == "max":
        return float(arr.max())
    if kind == "std":
        return float(arr.std(ddof=1)) if len(arr) > 1 else 0.0
    if kind == "fraction":
        return float(arr.mean())
    raise ValueError(kind)


def _entry(check: Check, target: str, values: list, total: int, tol: float) -> dict:
    got = [v for v in values if v is not None]
    if not got:
        return {"id": check.id, "module": check.module, "anchor": check.anchor, "target": target,
                "aggregate": check.aggregate, "points": total, "applicable_points": 0,
                "max_residual": None, "tolerance": tol, "verdict": "inapplicable"}
    value = _aggregate(check.aggregate, got)
    verdict = "pass" if value <= tol else "fail"
    return {"id": check.id, "module": check.module, "anchor": check.anchor, "target": target,
            "aggregate": check.aggregate, "points": total, "applicable_points": len(got),
            "max_residual": value, "tolerance": tol, "verdict": verdict}


def _run_target(suite: Suite, target: str, cfg: SuiteConfig) -> list[dict]:
    checks = [REGISTRY[i] for i in suite.check_ids]
    rng = _rng(cfg.seed, suite.name, target)
    if suite.kind == "clifford":
        obj = build_clifford_rep(int(target))
        samples = [CliffordSample(obj, rng) for _ in range(cfg.samples)]
    elif suite.kind == "model":
        obj = MODEL_FACTORIES[target]()
        samples = [ModelPoint(obj, x, rng) for x in obj.sample(rng, cfg.samples)]
    else:
        obj = _build_candidate(target, suite)
        gks_tol = cfg.tol("gks")
        samples = [CandidatePoint(obj, x, gks_tol) for x in obj.model.sample(rng, cfg.samples)]
    out = []
    for check in checks:
        tol = cfg.tol(check.id)
        if check.applies is not None and not check.applies(obj):
            out.append(_entry(check, target, [], len(samples), tol))
            continue
        values = []
        for s in samples:
            if suite.kind == "candidate" and check.gated and not s.valid:
                values.append(None)
            else:
                values.append(check.func(s))
        out.append(_entry(check, target, values, len(samples), tol))
    return out


def engine_conventions() -> dict:
    """Sign conventions, several of them measured on the spot."""
    rep3 = build_clifford_rep(3)
    s3 = s3_group_model()
    phi0 = np.eye(rep3.d)[0]
    const = gks.GKSCandidate(s3, rep3, lambda x: phi0, lambda x: 0.5 * np.eye(3))
    res_plus = gks.gks_residual(const, np.zeros(3))
    killing_sign = "+1/2" if res_plus < 1e-10 else "-1/2"
    return {
        "clifford": "X.X = -|X|^2; (X^Y). = X.Y. + g(X,Y)",
        "cl3_volume_sign": int(rep3.volume_sign),
        "cl7_volume_sign": int(build_clifford_rep(7).volume_sign),
        "chirality": "volume element for n = 0 mod 4, complex structure times volume for n = 2 mod 4",
        "s3_frame_orientation": "left-invariant (xi_1, xi_2, xi_3) positive, nabla_{xi_1} xi_2 = xi_3",
        "s3_constant_spinor_killing_constant": killing_sign,
        "s3_positive_killing_spinor": "sigma(q)^T Phi_0, sigma(q) = q0 + q1 g2g3 + q2 g3g1 + q3 g1g2",
        "hypersurface_orientation": "(e_1, ..., e_n, nu) positive in R^(n+1); outward on spheres",
        "second_fundamental_form": "II(X, Y) = <D_X nu, Y>, +id on the unit sphere",
        "induced_clifford_action": "X.psi := X.nu.psi",
        "killing_sign_minus_spheres": "restriction to the orientation-reversed sphere",
        "laplacian": "Delta = delta d (non-negative)",
        "two_form_norm": "|e_1 ^ e_2| = 1",
        "sampling": "uniform in the chart box [-box, box]^n, rejected points resampled",
    }


def run_suite(cfg: SuiteConfig) -> dict:
    """Run a suite and return the report as an ordered dict."""
    cfg.validate()
    names = list(SUITES) if cfg.suite == "all" else [cfg.suite]
    checks = []
    for name in names:
        suite = SUITES[name]
        for target in _targets(suite, cfg):
            for entry in _run_target(suite, target, cfg):
                checks.append({"suite": name, **entry})
    counts = {v: sum(1 for c in checks if c["verdict"] == v) for v in ("pass", "fail", "inapplicable")}
    used = sorted({c["id"] for c in checks})
    return {
        "tool": "gkspin",
        "report_version": 1,
        "config": {
            "suite": cfg.suite,
            "model": cfg.model,
            "samples": cfg.samples,
            "seed": cfg.seed,
            "tolerance_overrides": dict(sorted(cfg.tolerances.items())),
            "tolerances": {i: cfg.tol(i) for i in used},
        },
        "conventions": engine_conventions(),
        "checks": checks,
        "summary": {**counts, "status": "fail" if counts["fail"] else "pass"},
    }


def list_checks() -> str:
    lines = [f"{c.id}\t{c.module}\t\"{c.anchor}\"" for c in REGISTRY.values()]
    return "\n".join(lines) + "\n"
