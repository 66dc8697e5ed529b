"""Real spinor representations of the Clifford algebras Cl_n, 2 <= n <= 8.

Spinors are plain real coordinate vectors; 2-forms are antisymmetric ``n x n``
arrays ``sigma`` standing for ``sum_{i<j} sigma[i, j] e_i ^ e_j``.  Clifford
multiplication obeys ``X.X = -|X|^2`` and ``(X^Y). = X.Y. + g(X, Y)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, reduce

import numpy as np
import scipy.linalg

from . import ad

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)

MIN_DIM, MAX_DIM = 2, 8


def realify(m: np.ndarray) -> np.ndarray:
    """Real form of a complex matrix, ``x + iy -> [[x, -y], [y, x]]``."""
    return np.block([[m.real, -m.imag], [m.imag, m.real]])


def _kron(mats) -> np.ndarray:
    return reduce(np.kron, mats, np.eye(1, dtype=complex))


def _hermitian_gammas(n: int) -> list[np.ndarray]:
    # Jordan-Wigner: anticommuting Hermitian matrices squaring to +1
    m = n // 2
    out = []
    for k in range(m):
        pre, post = [_Z] * k, [_I2] * (m - k - 1)
        out.append(_kron(pre + [_X] + post))
        out.append(_kron(pre + [_Y] + post))
    if n % 2:
        out.append(_kron([_Z] * m))
    return out


@dataclass(frozen=True, eq=False)
class CliffordRep:
    """Skew-symmetric orthogonal generators ``gammas[i]`` of a real Cl_n module.

    ``complex_structure`` is a complex structure commuting with every
    generator when the module is the realification of a complex one; it is
    needed for the chirality operator in dimensions 2 and 6.
    """

    gammas: np.ndarray
    complex_structure: np.ndarray | None = None

    @property
    def n(self) -> int:
        return self.gammas.shape[0]

    @property
    def d(self) -> int:
        return self.gammas.shape[1]

    @cached_property
    def identity(self) -> np.ndarray:
        return np.eye(self.d)

    @cached_property
    def pairs(self) -> np.ndarray:
        """``pairs[i, j] = gamma_i gamma_j``."""
        return np.einsum("iab,jbc->ijac", self.gammas, self.gammas)

    @cached_property
    def volume(self) -> np.ndarray:
        return reduce(np.matmul, self.gammas)

    @cached_property
    def volume_sign(self) -> int | None:
        """The scalar by which the volume element acts, for n = 3 and 7."""
        if self.n % 4 != 3:
            return None
        for eps in (1, -1):
            if np.allclose(self.volume, eps * self.identity, atol=1e-12):
                return eps
        raise ValueError("volume element is not a scalar in this module")

    @cached_property
    def chirality(self) -> np.ndarray:
        """Involution whose +-1 eigenspaces are the half-spinor modules."""
        if self.n % 4 == 0:
            return self.volume
        if self.n % 4 == 2:
            if self.complex_structure is None:
                raise ValueError("chirality in dimension 2 mod 4 needs a complex structure")
            return self.complex_structure @ self.volume
        raise ValueError(f"no chirality splitting in odd dimension {self.n}")

    @cached_property
    def projectors(self) -> tuple[np.ndarray, np.ndarray]:
        """``(P+, P-) = ((1 + chirality)/2, (1 - chirality)/2)``."""
        c = self.chirality
        return 0.5 * (self.identity + c), 0.5 * (self.identity - c)

    @cached_property
    def quaternionic(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return _solve_quaternionic(self)

    def vector_op(self, v):
        """Matrix of Clifford multiplication by the vector ``v``."""
        return ad.einsum("i,iab->ab", v, self.gammas)

    def form_op(self, sigma):
        """Matrix of Clifford multiplication by the 2-form ``sigma``."""
        return 0.5 * ad.einsum("ij,ijab->ab", sigma, self.pairs)


def build_clifford_rep(n: int) -> CliffordRep:
    """Realified complex spin representation of Cl_n, of real dimension
    ``2 ** (n // 2 + 1)``.

    In dimension 3 the module has volume element acting as ``+1``.
    """
    if not MIN_DIM <= n <= MAX_DIM:
        raise ValueError(f"dimension must lie in [{MIN_DIM}, {MAX_DIM}], got {n}")
    gammas = np.stack([realify(1j * g) for g in _hermitian_gammas(n)])
    size = gammas.shape[1] // 2
    cx = realify(1j * np.eye(size))
    return CliffordRep(gammas, cx)


def induced_rep(ambient: CliffordRep, chirality: int = 1) -> tuple[CliffordRep, np.ndarray]:
    """Clifford module of a hypersurface, ``X . psi := X . nu . psi``.

    The last ambient generator plays the unit normal.  When the hypersurface
    dimension is odd the induced module is reducible and is cut down to the
    ambient half-spinors of the given chirality.  Returns the rep and the
    isometric embedding ``U`` (ambient coords = ``U @ reduced coords``).
    """
    g = ambient.gammas
    induced = np.einsum("iab,bc->iac", g[:-1], g[-1])
    cx = ambient.complex_structure
    if (ambient.n - 1) % 2 == 0:
        return CliffordRep(induced, cx), np.eye(ambient.d)
    proj = ambient.projectors[0 if chirality > 0 else 1]
    w, v = np.linalg.eigh(proj)
    u = v[:, w > 0.5]
    red = np.einsum("ai,kab,bj->kij", u, induced, u)
    red_cx = None if cx is None else u.T @ cx @ u
    return CliffordRep(red, red_cx), u


def mul_vector(rep: CliffordRep, v, psi):
    if ad.shape(v) != (rep.n,):
        raise ValueError(f"vector must have length {rep.n}, got shape {ad.shape(v)}")
    return rep.vector_op(v) @ psi


def mul_two_form(rep: CliffordRep, sigma, psi):
    return rep.form_op(sigma) @ psi


def trace_identity_residual(rep: CliffordRep, A: np.ndarray, psi: np.ndarray) -> float:
    """``|sum_i e_i . A(e_i) . psi + tr(A) psi|``, zero for symmetric A."""
    A = np.asarray(A, dtype=float)
    if not np.allclose(A, A.T, atol=1e-12):
        raise ValueError("endomorphism must be symmetric")
    g = rep.gammas
    lhs = np.einsum("iab,jbc,ji,c->a", g, g, A, psi)
    return float(np.linalg.norm(lhs + np.trace(A) * psi))


def _solve_quaternionic(rep: CliffordRep):
    if rep.n != 5:
        raise ValueError("quaternionic triple is defined for n = 5 only")
    d = rep.d
    eye = np.eye(d)
    # J g_i + g_i J = 0 for every generator, row-major vec(J)
    system = np.concatenate([np.kron(eye, g.T) + np.kron(g, eye) for g in rep.gammas])
    _, s, vt = np.linalg.svd(system)
    null = vt[np.sum(s > 1e-9):]
    if null.shape[0] == 0:
        raise ValueError("no operator anticommutes with the Clifford action")
    proj = null.T @ null
    # canonical choice: projection of the first matrix unit not killed by proj
    col = next(k for k in range(d * d) if proj[k, k] > 1e-8)
    j = proj[:, col].reshape(d, d)
    scale = -(j @ j)[0, 0]
    j = j / np.sqrt(scale)
    i = rep.volume
    k = i @ j
    for name, op in (("I", i), ("J", j), ("K", k)):
        if not np.allclose(op @ op, -eye, atol=1e-10) or not np.allclose(op.T @ op, eye, atol=1e-10):
            raise ValueError(f"{name} is not an orthogonal complex structure")
    return i, j, k


def quaternionic_triple(rep: CliffordRep) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(I, J, K)`` on a Cl_5 module: I is the volume action, J and K
    anticommute with I and with every vector."""
    return rep.quaternionic


def spin_lift(rep: CliffordRep, rot: np.ndarray) -> np.ndarray:
    """Orthogonal ``S`` with ``S gamma_i S^T = sum_j rot[j, i] gamma_j``.

    Defined up to sign; uses the principal logarithm of ``rot``.
    """
    log = scipy.linalg.logm(rot)
    log = np.real(log)
    log = 0.5 * (log - log.T)
    gen = -0.25 * np.einsum("ij,ijab->ab", log, rep.pairs)
    return scipy.linalg.expm(gen)


def spin_lift_near_identity(rep: CliffordRep, rot):
    """Spin lift of a rotation infinitesimally close to the identity.

    Truncated log/exp series; exact for Duals whose primal is the identity
    up to third-order perturbations.
    """
    e = rot - np.eye(rep.n)
    e2 = e @ e
    log = e - 0.5 * e2 + (e2 @ e) / 3.0
    gen = -0.25 * ad.einsum("ij,ijab->ab", log, rep.pairs)
    g2 = gen @ gen
    return np.eye(rep.d) + gen + 0.5 * g2 + (g2 @ gen) / 6.0


# exterior algebra helpers -------------------------------------------------

def wedge(x, y):
    return ad.outer(x, y) - ad.outer(y, x)


def form_pairs(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


def basis_form(n: int, i: int, j: int) -> np.ndarray:
    s = np.zeros((n, n))
    s[i, j], s[j, i] = 1.0, -1.0
    return s


def form_inner(sigma, tau):
    """Metric on 2-forms, with ``|e_1 ^ e_2| = 1``."""
    return 0.5 * ad.einsum("ij,ij->", sigma, tau)


def contract(sigma, x):
    """Interior product ``x -| sigma``, i.e. ``sigma(x, .)``."""
    return ad.einsum("i,ij->j", x, sigma)


def levi_civita(n: int) -> np.ndarray:
    eps = np.zeros((n,) * n)
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
        eps[perm] = -1.0 if inv % 2 else 1.0
    return eps


def hodge3(sigma):
    """Hodge star of a 2-form on an oriented 3-space, as a vector."""
    return 0.5 * ad.einsum("ijk,ij->k", levi_civita(3), sigma)


def hodge4(sigma):
    """Hodge star on 2-forms of an oriented 4-space."""
    return 0.5 * ad.einsum("ijkl,ij->kl", levi_civita(4), sigma)


def selfdual_bases() -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal bases of the self-dual and anti-self-dual 2-forms in
    dimension 4, ordered ``e12 +- e34, e13 -+ e24, e14 +- e23``."""
    b = lambda i, j: basis_form(4, i, j)
    plus = [b(0, 1) + b(2, 3), b(0, 2) - b(1, 3), b(0, 3) + b(1, 2)]
    minus = [b(0, 1) - b(2, 3), b(0, 2) + b(1, 3), b(0, 3) - b(1, 2)]
    r = 1 / np.sqrt(2)
    return r * np.stack(plus), r * np.stack(minus)
