"""Bounded cochain complexes and complexes assembled from blocks of matrices.

Hom-type complexes are described element-wise: a degree-n element is a dict
from block keys to matrices, and the differential is an ordinary Python
function on such dicts.  ``LayoutComplex`` turns that description into plain
matrices, optionally cut down to a stable subspace in every degree (fixed
points of a finite group, filtration-preserving maps, ...).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence

from .exactlin import Mat, Subspace, rref, solve


class ComplexError(ValueError):
    pass


@dataclass(frozen=True)
class ChainComplex:
    """Cochain complex; ``differentials[k]`` maps degree min_deg+k to min_deg+k+1."""

    min_deg: int
    dims: tuple
    differentials: tuple
    validate: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(self.dims))
        object.__setattr__(self, "differentials", tuple(self.differentials))
        if len(self.differentials) != max(len(self.dims) - 1, 0):
            raise ComplexError("need exactly one differential between consecutive terms")
        for k, d in enumerate(self.differentials):
            if d.shape != (self.dims[k + 1], self.dims[k]):
                raise ComplexError(f"differential in degree {self.min_deg + k} has shape {d.shape}, "
                                   f"expected {(self.dims[k + 1], self.dims[k])}")
        if self.validate:
            for k in range(len(self.differentials) - 1):
                if not (self.differentials[k + 1] @ self.differentials[k]).is_zero():
                    raise ComplexError(f"d∘d ≠ 0 starting in degree {self.min_deg + k}")

    @property
    def max_deg(self) -> int:
        return self.min_deg + len(self.dims) - 1

    @property
    def degrees(self) -> range:
        return range(self.min_deg, self.max_deg + 1)

    def dim(self, n: int) -> int:
        k = n - self.min_deg
        return self.dims[k] if 0 <= k < len(self.dims) else 0

    def d(self, n: int) -> Mat:
        k = n - self.min_deg
        if 0 <= k < len(self.differentials):
            return self.differentials[k]
        return Mat.zeros(self.dim(n + 1), self.dim(n))

    def cocycles(self, n: int) -> Subspace:
        return rref(self.d(n)).kernel

    def coboundaries(self, n: int) -> Subspace:
        return Subspace.span_columns(self.d(n - 1))

    def h(self, n: int) -> int:
        return self.cocycles(n).dim - self.d(n - 1).rank()

    def cohomology_dims(self) -> list[int]:
        return [self.h(n) for n in self.degrees]

    def cohomology_reps(self, n: int) -> list[tuple]:
        """Cocycles whose classes form a basis of H^n."""
        b = self.coboundaries(n)
        reps = []
        acc = b
        for z in self.cocycles(n).basis:
            if not acc.contains(z):
                reps.append(z)
                acc = acc + Subspace(len(z), [z])
        return reps

    def is_coboundary(self, n: int, v: Sequence) -> bool:
        return self.coboundaries(n).contains(v)

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * self.dim(n) for n in self.degrees)

    def shift(self, k: int) -> ChainComplex:
        """C[k]: degree n holds C^{n+k}, differential multiplied by (-1)^k."""
        sign = -1 if k % 2 else 1
        return ChainComplex(self.min_deg - k, self.dims, [d.scale(sign) for d in self.differentials], validate=False)


def ext_dims(c: ChainComplex) -> list[int]:
    """Cohomology dimensions h^n for n in c.degrees."""
    if c.validate is False:
        for n in c.degrees:
            if not (c.d(n + 1) @ c.d(n)).is_zero():
                raise ComplexError(f"d∘d ≠ 0 starting in degree {n}")
    return c.cohomology_dims()


def zero_complex() -> ChainComplex:
    return ChainComplex(0, (0,), ())


def dims_in_range(c: ChainComplex, lo: int, hi: int) -> list[int]:
    return [c.h(n) if n in c.degrees else 0 for n in range(lo, hi + 1)]


Elem = dict


def add_into(target: dict, key: Hashable, m: Mat) -> None:
    if key in target:
        target[key] = target[key] + m
    else:
        target[key] = m


def elem_add(a: Elem, b: Elem) -> Elem:
    out = dict(a)
    for k, v in b.items():
        add_into(out, k, v)
    return out


def elem_scale(a: Elem, c) -> Elem:
    return {k: v.scale(c) for k, v in a.items()}


class Layout:
    """Ordered blocks of matrices flattened into one coordinate vector."""

    def __init__(self, blocks: Iterable[tuple[Hashable, int, int]]):
        self.blocks = [(k, r, c) for k, r, c in blocks if r * c > 0]
        self.offset: dict = {}
        self.shape: dict = {}
        pos = 0
        for k, r, c in self.blocks:
            self.offset[k] = pos
            self.shape[k] = (r, c)
            pos += r * c
        self.size = pos

    def __contains__(self, key) -> bool:
        return key in self.offset

    def pack(self, elem: Elem) -> tuple:
        v = [Fraction(0)] * self.size
        for k, m in elem.items():
            if k not in self.offset:
                if m.rows * m.cols and not m.is_zero():
                    raise KeyError(f"block {k!r} is not part of this layout")
                continue
            if m.shape != self.shape[k]:
                raise ValueError(f"block {k!r} has shape {m.shape}, expected {self.shape[k]}")
            o = self.offset[k]
            v[o:o + m.rows * m.cols] = m.vec()
        return tuple(v)

    def unpack(self, v: Sequence) -> Elem:
        out = {}
        for k, r, c in self.blocks:
            o = self.offset[k]
            out[k] = Mat.unvec(v[o:o + r * c], r, c)
        return out

    def unit(self, idx: int) -> Elem:
        v = [0] * self.size
        v[idx] = 1
        return self.unpack(v)

    def zero(self) -> Elem:
        return {k: Mat.zeros(r, c) for k, r, c in self.blocks}


def matrix_of(fn: Callable[[Elem], Elem], src: Layout, tgt: Layout) -> Mat:
    cols = [tgt.pack(fn(src.unit(i))) for i in range(src.size)]
    return Mat.from_columns(cols, tgt.size) if cols else Mat.zeros(tgt.size, 0)


class LayoutComplex:
    """Complex given by per-degree layouts and an element-level differential.

    ``constraint(n)`` may return a Subspace of layout coordinates; the complex
    is then the subcomplex formed by those subspaces, written in their bases.
    """

    def __init__(self, lo: int, hi: int, layout: Callable[[int], Layout],
                 diff: Callable[[int, Elem], Elem],
                 constraint: Callable[[int], Subspace | None] | None = None):
        self.lo, self.hi = lo, hi
        self.layouts = {n: layout(n) for n in range(lo, hi + 1)}
        self._diff = diff
        self.embed: dict[int, Mat] = {}
        for n in range(lo, hi + 1):
            lay = self.layouts[n]
            sub = constraint(n) if constraint else None
            if sub is None:
                self.embed[n] = Mat.identity(lay.size)
            else:
                self.embed[n] = sub.basis_matrix() if sub.dim else Mat.zeros(lay.size, 0)
        diffs = []
        for n in range(lo, hi):
            raw = matrix_of(lambda e, n=n: self.differential(n, e), self.layouts[n], self.layouts[n + 1])
            diffs.append(_restrict(raw, self.embed[n], self.embed[n + 1]))
        self.chain = ChainComplex(lo, [self.embed[n].cols for n in range(lo, hi + 1)], diffs)

    def layout(self, n: int) -> Layout:
        return self.layouts.get(n, Layout([]))

    def differential(self, n: int, e: Elem) -> Elem:
        out = self._diff(n, e)
        tgt = self.layouts.get(n + 1)
        if tgt is None:
            return {}
        return {k: v for k, v in out.items() if k in tgt}

    def to_elem(self, n: int, v: Sequence) -> Elem:
        return self.layout(n).unpack(self.embed[n].apply(v))

    def to_vec(self, n: int, e: Elem) -> tuple:
        raw = self.layout(n).pack(e)
        emb = self.embed[n]
        if emb.cols == emb.rows:
            return raw
        return solve(emb, Mat.from_columns([raw], emb.rows)).col(0)


def _restrict(raw: Mat, src: Mat, tgt: Mat) -> Mat:
    img = raw @ src
    if tgt.cols == tgt.rows:
        return img
    if img.cols == 0:
        return Mat.zeros(tgt.cols, 0)
    return solve(tgt, img)


def reynolds_subspace(layout: Layout, actions: Sequence[Callable[[Elem], Elem]]) -> Subspace:
    """Fixed points of a finite group acting on layout elements (average over the group)."""
    n = len(actions)
    total = None
    for act in actions:
        m = matrix_of(act, layout, layout)
        total = m if total is None else total + m
    if total is None:
        return Subspace.whole(layout.size)
    return Subspace.span_columns(total.scale(Fraction(1, n)))


def hom_layout(src_dims: dict, tgt_dims: dict, m: int, tag: Hashable = None) -> Layout:
    """Blocks Hom(S^i, T^{i+m}) keyed by (tag, i)."""
    return Layout(((tag, i), tgt_dims.get(i + m, 0), si) for i, si in sorted(src_dims.items()))


def hom_differential(src_d: Callable[[int], Mat], tgt_d: Callable[[int], Mat],
                     src_dims: dict, tgt_dims: dict, m: int, e: Elem, tag: Hashable = None) -> Elem:
    """(D x) = d_T x - (-1)^m x d_S on the plain Hom complex."""
    out: dict = {}
    sign = -1 if m % 2 else 1
    for (t, i), x in e.items():
        if t != tag:
            continue
        j = i + m
        if j + 1 in tgt_dims:
            add_into(out, (tag, i), tgt_d(j) @ x)
        if i - 1 in src_dims:
            add_into(out, (tag, i - 1), (x @ src_d(i - 1)).scale(-sign))
    return out


def range_of_hom(src_degrees: Sequence[int], tgt_degrees: Sequence[int], extra: int = 0) -> tuple[int, int]:
    if not src_degrees or not tgt_degrees:
        return (0, 0)
    return (min(tgt_degrees) - max(src_degrees), max(tgt_degrees) - min(src_degrees) + extra)
