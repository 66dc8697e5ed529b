"""Forward-mode automatic differentiation with nestable dual numbers.

A :class:`Dual` holds a value ``val`` and a stack of tangents ``eps`` whose
leading axis indexes perturbation directions, so one pass computes all the
directional derivatives of a Jacobian.  Every call to :func:`jvp` opens a fresh
perturbation tag; derivatives can be nested (a function that internally
differentiates can itself be differentiated) without perturbation confusion.
Values and tangents are numpy arrays or, when nested, Duals of an enclosing
perturbation.

Code that must run on Duals uses the helpers in this module (``sqrt``,
``inv``, ``einsum``, ``stack``...) instead of their numpy counterparts.
"""

from __future__ import annotations

import itertools
import string

import numpy as np

_tags = itertools.count(1)


class Dual:
    __slots__ = ("val", "eps", "tag")
    # make numpy defer to our reflected operators
    __array_ufunc__ = None

    def __init__(self, val, eps, tag: int):
        self.val = val
        self.eps = eps
        self.tag = tag

    def __repr__(self) -> str:
        return f"Dual(tag={self.tag}, val={self.val!r}, eps={self.eps!r})"

    @property
    def shape(self) -> tuple:
        return np.shape(primal(self))

    @property
    def ndim(self) -> int:
        return len(self.shape)

    @property
    def width(self) -> int:
        """Number of perturbation directions."""
        return shape(self.eps)[0]

    def __len__(self) -> int:
        return self.shape[0]

    def __getitem__(self, idx):
        eidx = (slice(None),) + (idx if isinstance(idx, tuple) else (idx,))
        return Dual(self.val[idx], self.eps[eidx], self.tag)

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    @property
    def T(self) -> "Dual":
        return self.transpose()

    def transpose(self, *axes) -> "Dual":
        if len(axes) == 1 and isinstance(axes[0], (tuple, list)):
            axes = tuple(axes[0])
        if not axes:
            axes = tuple(reversed(range(self.ndim)))
        eaxes = (0,) + tuple(a % self.ndim + 1 for a in axes)
        return Dual(self.val.transpose(axes), self.eps.transpose(eaxes), self.tag)

    def reshape(self, *shp) -> "Dual":
        if len(shp) == 1 and isinstance(shp[0], (tuple, list)):
            shp = tuple(shp[0])
        val = self.val.reshape(shp)
        return Dual(val, self.eps.reshape((self.width,) + shape(val)), self.tag)

    def sum(self, axis=None) -> "Dual":
        if axis is None:
            eax = tuple(range(1, self.ndim + 1))
        else:
            eax = tuple(a % self.ndim + 1 for a in np.atleast_1d(axis))
        return Dual(self.val.sum(axis=axis), self.eps.sum(axis=eax), self.tag)

    def __neg__(self) -> "Dual":
        return Dual(-self.val, -self.eps, self.tag)

    def __pos__(self) -> "Dual":
        return self

    def __add__(self, other):
        return _add(self, other)

    def __radd__(self, other):
        return _add(other, self)

    def __sub__(self, other):
        return _add(self, -other)

    def __rsub__(self, other):
        return _add(other, -self)

    def __mul__(self, other):
        return _mul(self, other)

    def __rmul__(self, other):
        return _mul(other, self)

    def __truediv__(self, other):
        return _mul(self, reciprocal(other))

    def __rtruediv__(self, other):
        return _mul(other, reciprocal(self))

    def __matmul__(self, other):
        return _matmul(self, other)

    def __rmatmul__(self, other):
        return _matmul(other, self)

    def __pow__(self, k: int):
        if not isinstance(k, (int, np.integer)) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        out = np.ones(self.shape)
        for _ in range(int(k)):
            out = out * self
        return out


def primal(x):
    """Strip every perturbation level and return the underlying numbers."""
    while isinstance(x, Dual):
        x = x.val
    return x


def shape(x) -> tuple:
    return np.shape(primal(x))


def ndim(x) -> int:
    return len(shape(x))


def _top(*xs) -> int:
    return max((x.tag for x in xs if isinstance(x, Dual)), default=0)


def _parts(x, tag):
    if isinstance(x, Dual) and x.tag == tag:
        return x.val, x.eps
    return x, None


def _pad(e, rank: int):
    """Insert unit axes after the direction axis so ``e`` has ``rank`` value axes."""
    s = shape(e)
    if len(s) - 1 >= rank:
        return e
    return e.reshape((s[0],) + (1,) * (rank - len(s) + 1) + s[1:])


def _broadcast(e, shp):
    if shape(e) == shp:
        return e
    if isinstance(e, Dual):
        return Dual(_broadcast(e.val, shp), _broadcast(e.eps, (e.width,) + shp), e.tag)
    return np.broadcast_to(e, shp)


def _combine(val, terms, tag):
    terms = [t for t in terms if t is not None]
    rank = len(shape(val))
    eps = _pad(terms[0], rank)
    for t in terms[1:]:
        eps = eps + _pad(t, rank)
    width = shape(eps)[0]
    return Dual(val, _broadcast(eps, (width,) + shape(val)), tag)


def _add(a, b):
    tag = _top(a, b)
    av, ae = _parts(a, tag)
    bv, be = _parts(b, tag)
    return _combine(av + bv, [ae, be], tag)


def _mul(a, b):
    tag = _top(a, b)
    av, ae = _parts(a, tag)
    bv, be = _parts(b, tag)
    rank = max(ndim(av), ndim(bv))
    return _combine(
        av * bv,
        [None if ae is None else _pad(ae, rank) * bv,
         None if be is None else av * _pad(be, rank)],
        tag,
    )


def _mm_eps_left(ae, bv, ra: int, rb: int):
    # ae carries the direction axis in front of a rank-ra operand
    if ra == 1 and rb >= 2:
        return einsum("zk,...kl->z...l", ae, bv)
    if ra >= 2 and rb >= 2:
        ae = _pad(ae, max(ra, rb))
    return ae @ bv


def _mm_eps_right(av, be, ra: int, rb: int):
    if rb == 1:
        return einsum("...k,zk->z...", av, be)
    if ra >= 2:
        be = _pad(be, max(ra, rb))
    return av @ be


def _matmul(a, b):
    tag = _top(a, b)
    av, ae = _parts(a, tag)
    bv, be = _parts(b, tag)
    ra, rb = ndim(av), ndim(bv)
    return _combine(
        av @ bv,
        [None if ae is None else _mm_eps_left(ae, bv, ra, rb),
         None if be is None else _mm_eps_right(av, be, ra, rb)],
        tag,
    )


def reciprocal(x):
    if isinstance(x, Dual):
        r = reciprocal(x.val)
        return Dual(r, -x.eps * (r * r), x.tag)
    return 1.0 / x


def sqrt(x):
    if isinstance(x, Dual):
        s = sqrt(x.val)
        return Dual(s, x.eps * reciprocal(2.0 * s), x.tag)
    return np.sqrt(x)


def exp(x):
    if isinstance(x, Dual):
        e = exp(x.val)
        return Dual(e, x.eps * e, x.tag)
    return np.exp(x)


def inv(m):
    """Matrix inverse."""
    if isinstance(m, Dual):
        v = inv(m.val)
        return Dual(v, -(v @ m.eps @ v), m.tag)
    return np.linalg.inv(m)


def _fresh_letter(subscripts: str) -> str:
    return next(c for c in string.ascii_letters if c not in subscripts)


def einsum(subscripts: str, *operands):
    """Multilinear ``np.einsum`` over Duals; subscripts must contain ``->``."""
    tag = _top(*operands)
    if tag == 0:
        return np.einsum(subscripts, *operands)
    if "->" not in subscripts:
        raise ValueError("Dual einsum needs explicit output subscripts")
    ins, out = subscripts.split("->")
    specs = ins.split(",")
    z = _fresh_letter(subscripts)
    split = [_parts(op, tag) for op in operands]
    vals = [v for v, _ in split]
    val = einsum(subscripts, *vals)
    terms = []
    for i, (_, e) in enumerate(split):
        if e is None:
            continue
        ops = list(vals)
        ops[i] = e
        sp = list(specs)
        sp[i] = z + sp[i]
        terms.append(einsum(",".join(sp) + "->" + z + out, *ops))
    return _combine(val, terms, tag)


def _zeros_eps(v, width: int):
    return np.zeros((width,) + shape(v))


def stack(xs, axis: int = 0):
    xs = list(xs)
    tag = _top(*xs)
    if tag == 0:
        return np.stack(xs, axis=axis)
    split = [_parts(x, tag) for x in xs]
    width = next(shape(e)[0] for _, e in split if e is not None)
    vals = stack([v for v, _ in split], axis=axis)
    eaxis = axis + 1 if axis >= 0 else axis
    eps = stack([_zeros_eps(v, width) if e is None else e for v, e in split], axis=eaxis)
    return Dual(vals, eps, tag)


def concatenate(xs, axis: int = 0):
    xs = list(xs)
    tag = _top(*xs)
    if tag == 0:
        return np.concatenate(xs, axis=axis)
    split = [_parts(x, tag) for x in xs]
    width = next(shape(e)[0] for _, e in split if e is not None)
    vals = concatenate([v for v, _ in split], axis=axis)
    eaxis = axis + 1 if axis >= 0 else axis
    eps = concatenate([_zeros_eps(v, width) if e is None else e for v, e in split], axis=eaxis)
    return Dual(vals, eps, tag)


def dot(a, b):
    return einsum("...i,...i->...", a, b)


def outer(a, b):
    return einsum("i,j->ij", a, b)


def trace(m):
    return einsum("ii->", m)


def jvp(f, x, directions):
    """Derivatives of ``f`` at ``x`` along each row of ``directions``.

    Returns an array whose axis 0 indexes the directions.  ``x`` and
    ``directions`` may themselves be Duals of enclosing perturbations, which
    is how higher derivatives are obtained.
    """
    tag = next(_tags)
    out = f(Dual(x, directions, tag))
    if isinstance(out, Dual) and out.tag == tag:
        return out.eps
    return np.zeros((shape(directions)[0],) + shape(out))


def derivative(f, x, v):
    """Directional derivative of ``f`` at ``x`` along ``v``."""
    return jvp(f, x, stack([v]))[0]


def jacobian(f, x):
    """Stack of partial derivatives; axis 0 is the coordinate."""
    return jvp(f, x, np.eye(shape(x)[0]))
