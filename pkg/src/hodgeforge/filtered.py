"""Filtered vector spaces, strictness, truncations and graded quasi-isomorphisms.

A filtration is stored by its jumps: ``jumps[i]`` is F^i at every index i
with F^i ≠ F^{i+1}.  F^x equals the stored piece at the smallest jump ≥ x and
is zero above the largest jump, so the stored data determine F completely.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .chains import ChainComplex, ComplexError, Layout, LayoutComplex, add_into, hom_differential
from .exactlin import DimensionError, Mat, Subspace, left_right, rref, solve


class FiltrationError(ValueError):
    pass


class FilteredSpace:
    __slots__ = ("dim", "jumps")

    def __init__(self, dim: int, pieces: dict):
        """``pieces`` maps indices to subspaces; F^x is the piece at the smallest index ≥ x."""
        items = sorted(pieces.items())
        for i, s in items:
            if s.ambient_dim != dim:
                raise FiltrationError(f"F^{i} lives in dimension {s.ambient_dim}, expected {dim}")
        for (i, s), (j, t) in zip(items, items[1:]):
            if not t <= s:
                raise FiltrationError(f"filtration not decreasing: F^{j} ⊄ F^{i}")
        if dim and (not items or items[0][1].dim != dim):
            raise FiltrationError("filtration not exhaustive: lowest piece is not the whole space")
        jumps = {}
        for k, (i, s) in enumerate(items):
            nxt = items[k + 1][1] if k + 1 < len(items) else Subspace.zero(dim)
            if s != nxt:
                jumps[i] = s
        self.dim = dim
        self.jumps = jumps

    @classmethod
    def trivial(cls, dim: int, at: int = 0) -> FilteredSpace:
        """Whole space up to index ``at``, zero above."""
        return cls(dim, {at: Subspace.whole(dim)})

    @classmethod
    def from_bases(cls, dim: int, bases: dict) -> FilteredSpace:
        return cls(dim, {int(i): Subspace(dim, vs) for i, vs in bases.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, FilteredSpace) and self.dim == other.dim and self.jumps == other.jumps

    def __hash__(self) -> int:
        return hash((self.dim, tuple(sorted(self.jumps.items()))))

    def __repr__(self) -> str:
        return f"FilteredSpace(dim={self.dim}, jumps={ {i: s.dim for i, s in sorted(self.jumps.items())} })"

    @property
    def indices(self) -> list[int]:
        return sorted(self.jumps)

    def F(self, x: int) -> Subspace:
        for i in self.indices:
            if i >= x:
                return self.jumps[i]
        return Subspace.zero(self.dim)

    def gr_dims(self) -> dict:
        return {i: self.F(i).dim - self.F(i + 1).dim for i in self.indices}

    def t_H(self) -> int:
        return sum(i * g for i, g in self.gr_dims().items())

    def shift(self, r: int) -> FilteredSpace:
        """Filtration of the twist by r: new F^i = old F^{i+r}."""
        return FilteredSpace(self.dim, {i - r: s for i, s in self.jumps.items()})

    def push(self, g: Mat) -> FilteredSpace:
        """Transport along an invertible map."""
        return FilteredSpace(g.rows, {i: s.image(g) for i, s in self.jumps.items()})

    def induced_on(self, w: Subspace) -> FilteredSpace:
        """Filtration F^i ∩ W written in the stored basis of W."""
        if w.dim == 0:
            return FilteredSpace(0, {})
        pieces = {}
        for i in self.indices:
            inter = self.jumps[i] & w
            pieces[i] = Subspace(w.dim, (w.coordinates(v) for v in inter.basis))
        pieces.setdefault(min(self.indices) if self.indices else 0, Subspace.whole(w.dim))
        return FilteredSpace(w.dim, pieces)

    def image_under(self, q: Mat) -> FilteredSpace:
        """Filtration q(F^i) on the target of a surjection q."""
        if q.rows == 0:
            return FilteredSpace(0, {})
        pieces = {i: s.image(q) for i, s in self.jumps.items()}
        return FilteredSpace(q.rows, pieces)

    def direct_sum(self, other: FilteredSpace) -> FilteredSpace:
        n = self.dim + other.dim
        pieces = {}
        for i in set(self.indices) | set(other.indices):
            a = [tuple(v) + (Fraction(0),) * other.dim for v in self.F(i).basis]
            b = [(Fraction(0),) * self.dim + tuple(v) for v in other.F(i).basis]
            pieces[i] = Subspace(n, a + b)
        return FilteredSpace(n, pieces)

    def tensor(self, other: FilteredSpace) -> FilteredSpace:
        n = self.dim * other.dim
        pieces = {}
        for i in self.indices:
            for j in other.indices:
                k = i + j
                vs = [tuple(x * y for x in a for y in b) for a in self.F(i).basis for b in other.F(j).basis]
                s = Subspace(n, vs)
                pieces[k] = pieces[k] + s if k in pieces else s
        keys = sorted(pieces)
        acc = {}
        for k in reversed(keys):
            higher = [pieces[j] for j in keys if j >= k]
            s = higher[0]
            for t in higher[1:]:
                s = s + t
            acc[k] = s
        return FilteredSpace(n, acc)

    def dual(self) -> FilteredSpace:
        """F^i(V*) = annihilator of F^{1-i}(V)."""
        if self.dim == 0:
            return FilteredSpace(0, {})
        return FilteredSpace(self.dim, {-j: self.F(j + 1).annihilator() for j in self.indices})


def _coords(s: Subspace, m: Mat) -> Mat:
    """Coordinates in the basis of s of the columns of m (all of which lie in s)."""
    if s.dim == 0:
        return Mat.zeros(0, m.cols)
    return solve(s.basis_matrix(), m)


@dataclass(frozen=True)
class FilteredMap:
    source: FilteredSpace
    target: FilteredSpace
    matrix: Mat

    def __post_init__(self):
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise DimensionError("matrix shape does not match the filtered spaces")

    def is_filtered(self) -> bool:
        return all(self.source.F(i).image(self.matrix) <= self.target.F(i) for i in self.source.indices)


def is_strict(f: FilteredMap) -> tuple[bool, tuple | None]:
    """(True, None) if f(F^iM) = F^iN ∩ Im f for all i, else (False, (i, witness vector))."""
    im = Subspace.span_columns(f.matrix)
    for i in sorted(set(f.source.indices) | set(f.target.indices)):
        left = f.source.F(i).image(f.matrix)
        right = f.target.F(i) & im
        if left != right:
            w = next(v for v in right.basis if not left.contains(v))
            return False, (i, w)
    return True, None


@dataclass(frozen=True)
class FilteredComplex:
    min_deg: int
    terms: tuple
    differentials: tuple
    validate: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "differentials", tuple(self.differentials))
        if len(self.differentials) != max(len(self.terms) - 1, 0):
            raise ComplexError("need one differential between consecutive terms")
        if self.validate:
            self.underlying()
            for n in self.degrees[:-1]:
                if not self.map(n).is_filtered():
                    raise FiltrationError(f"differential in degree {n} does not preserve the filtration")

    @classmethod
    def single(cls, space: FilteredSpace, deg: int = 0) -> FilteredComplex:
        return cls(deg, (space,), ())

    @property
    def degrees(self) -> range:
        return range(self.min_deg, self.min_deg + len(self.terms))

    def term(self, n: int) -> FilteredSpace:
        k = n - self.min_deg
        return self.terms[k] if 0 <= k < len(self.terms) else FilteredSpace(0, {})

    def dim(self, n: int) -> int:
        return self.term(n).dim

    def dims(self) -> dict:
        return {n: self.dim(n) for n in self.degrees}

    def d(self, n: int) -> Mat:
        k = n - self.min_deg
        if 0 <= k < len(self.differentials):
            return self.differentials[k]
        return Mat.zeros(self.dim(n + 1), self.dim(n))

    def map(self, n: int) -> FilteredMap:
        return FilteredMap(self.term(n), self.term(n + 1), self.d(n))

    def underlying(self) -> ChainComplex:
        return ChainComplex(self.min_deg, [t.dim for t in self.terms], self.differentials)

    def is_strict(self) -> tuple[bool, tuple | None]:
        for n in self.degrees[:-1]:
            ok, w = is_strict(self.map(n))
            if not ok:
                return False, (n,) + w
        return True, None

    def indices(self) -> list[int]:
        return sorted({i for t in self.terms for i in t.indices})

    def shift_filtration(self, r: int) -> FilteredComplex:
        return FilteredComplex(self.min_deg, [t.shift(r) for t in self.terms], self.differentials, validate=False)


def truncate(c: FilteredComplex, mode: str, n: int) -> FilteredComplex:
    """τ≤n (mode "le") or τ≥n (mode "ge") with induced / quotient filtrations."""
    if mode == "le":
        if n < c.min_deg:
            return FilteredComplex(n, (FilteredSpace(0, {}),), ())
        k = kernel_of(c.d(n)) if n in c.degrees else Subspace.zero(0)
        terms = [c.term(i) for i in c.degrees if i < n] + [c.term(n).induced_on(k)]
        diffs = [c.d(i) for i in c.degrees if i < n - 1]
        if n - 1 in c.degrees:
            diffs.append(_coords(k, c.d(n - 1)))
        return FilteredComplex(c.min_deg, terms, diffs, validate=False)
    if mode == "ge":
        top = max(c.degrees)
        if n > top:
            return FilteredComplex(n, (FilteredSpace(0, {}),), ())
        if n - 1 < c.min_deg:
            return c
        ker = kernel_of(c.d(n - 1))
        q, s = ker.quotient_data()
        coim = c.term(n - 1).image_under(q)
        terms = [coim] + [c.term(i) for i in c.degrees if i >= n]
        diffs = [c.d(n - 1) @ s] + [c.d(i) for i in c.degrees if n <= i < top]
        return FilteredComplex(n - 1, terms, diffs, validate=False)
    raise ValueError(f"unknown truncation mode {mode!r}")


def truncation_inclusion(c: FilteredComplex, n: int) -> list[Mat]:
    """Chain map τ≤n(c) → c, one matrix per degree of τ≤n(c)."""
    out = []
    for i in c.degrees:
        if i < n:
            out.append(Mat.identity(c.dim(i)))
        elif i == n:
            out.append(kernel_of(c.d(n)).basis_matrix() if kernel_of(c.d(n)).dim else Mat.zeros(c.dim(n), 0))
    return out


def kernel_of(m: Mat) -> Subspace:
    return rref(m).kernel


def cohomology_object(c: FilteredComplex, n: int) -> FilteredSpace:
    """ker d^n / im d^{n-1} with the filtration induced from ker d^n."""
    ker = kernel_of(c.d(n))
    fk = c.term(n).induced_on(ker)
    im = Subspace.span_columns(_coords(ker, c.d(n - 1))) if ker.dim else Subspace.zero(0)
    q = im.quotient_map()
    return fk.image_under(q)


def cohomology_data(c: FilteredComplex, n: int):
    """(cocycle subspace, quotient map from cocycle coordinates, section, filtered cohomology)."""
    ker = kernel_of(c.d(n))
    fk = c.term(n).induced_on(ker)
    im = Subspace.span_columns(_coords(ker, c.d(n - 1))) if ker.dim else Subspace.zero(0)
    q, s = im.quotient_data()
    return ker, q, s, fk.image_under(q)


def gr_piece(space: FilteredSpace, i: int) -> tuple[Mat, Mat]:
    """(lift, project): lift maps gr^i coordinates into the ambient space,
    project maps F^i (ambient vectors) onto gr^i coordinates."""
    fi, fi1 = space.F(i), space.F(i + 1)
    inner = Subspace(fi.dim, (fi.coordinates(v) for v in fi1.basis)) if fi.dim else Subspace.zero(0)
    q, s = inner.quotient_data()
    base = fi.basis_matrix() if fi.dim else Mat.zeros(space.dim, 0)
    lift = base @ s
    return lift, q


def _gr_map(src: FilteredSpace, tgt: FilteredSpace, m: Mat, i: int) -> Mat:
    lift_s, _ = gr_piece(src, i)
    _, proj_t = gr_piece(tgt, i)
    fi = tgt.F(i)
    return proj_t @ _coords(fi, m @ lift_s)


def gr_complex(c: FilteredComplex, i: int) -> ChainComplex:
    dims = [gr_piece(t, i)[0].cols for t in c.terms]
    diffs = [_gr_map(c.term(n), c.term(n + 1), c.d(n), i) for n in c.degrees[:-1]]
    return ChainComplex(c.min_deg, dims, diffs)


def is_quasi_iso(f: dict, a: ChainComplex, b: ChainComplex) -> bool:
    """Plain quasi-isomorphism test: the mapping cone is acyclic."""
    lo = min(a.min_deg, b.min_deg) - 1
    hi = max(a.max_deg, b.max_deg)
    dims, diffs = [], []
    for n in range(lo, hi + 1):
        dims.append(a.dim(n + 1) + b.dim(n))
    for n in range(lo, hi):
        fa = f.get(n + 1, Mat.zeros(b.dim(n + 1), a.dim(n + 1)))
        diffs.append(Mat.block([[-a.d(n + 1), None], [fa, b.d(n)]],
                               [a.dim(n + 2), b.dim(n + 1)], [a.dim(n + 1), b.dim(n)]))
    cone = ChainComplex(lo, dims, diffs)
    return all(h == 0 for h in cone.cohomology_dims())


def is_quasi_iso_filtered(f: dict, a: FilteredComplex, b: FilteredComplex) -> bool:
    """True iff f induces quasi-isomorphisms on every graded piece gr^i."""
    for n in a.degrees:
        fm = f.get(n, Mat.zeros(b.dim(n), a.dim(n)))
        if not FilteredMap(a.term(n), b.term(n), fm).is_filtered():
            raise FiltrationError(f"map does not preserve the filtration in degree {n}")
    idx = sorted(set(a.indices()) | set(b.indices()))
    for i in idx:
        ga, gb = gr_complex(a, i), gr_complex(b, i)
        gf = {n: _gr_map(a.term(n), b.term(n), f.get(n, Mat.zeros(b.dim(n), a.dim(n))), i)
              for n in a.degrees if n in b.degrees}
        if not is_quasi_iso(gf, ga, gb):
            return False
    return True


def gr_dims(m: FilteredSpace) -> dict:
    return m.gr_dims()


def t_H(m: FilteredSpace) -> int:
    return m.t_H()


def hom_dr(m: FilteredSpace, t: FilteredSpace) -> Subspace:
    """Filtration-preserving maps m → t, as row-major flattened t.dim × m.dim matrices."""
    rows = []
    for i in m.indices:
        src = m.F(i)
        if src.dim == 0:
            continue
        q = t.F(i).quotient_map()
        if q.rows == 0:
            continue
        rows.append(left_right(q, src.basis_matrix()))
    if not rows:
        return Subspace.whole(m.dim * t.dim)
    big = Mat.block([[r] for r in rows], [r.rows for r in rows], [m.dim * t.dim])
    return kernel_of(big)


def hom_dr_complex(m: FilteredComplex, t: FilteredComplex, tag="dr") -> LayoutComplex:
    """Hom complex of filtered complexes restricted to filtration-preserving maps."""
    lo = t.min_deg - max(m.degrees)
    hi = max(t.degrees) - m.min_deg
    md, td = m.dims(), t.dims()

    def layout(k):
        return Layout(((tag, i), td.get(i + k, 0), md[i]) for i in m.degrees)

    def diff(k, e):
        return hom_differential(m.d, t.d, md, td, k, e, tag)

    def constraint(k):
        lay = layout(k)
        parts = []
        for key, r, c in lay.blocks:
            i = key[1]
            parts.append(hom_dr(m.term(i), t.term(i + k)))
        return _product_subspace(parts)

    return LayoutComplex(lo, hi, layout, diff, constraint)


def _product_subspace(parts: Sequence[Subspace]) -> Subspace:
    n = sum(p.ambient_dim for p in parts)
    vs = []
    off = 0
    for p in parts:
        for v in p.basis:
            w = [Fraction(0)] * n
            w[off:off + p.ambient_dim] = v
            vs.append(w)
        off += p.ambient_dim
    return Subspace(n, vs)
