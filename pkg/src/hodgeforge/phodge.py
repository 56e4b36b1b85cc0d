"""p-adic Hodge complexes: a (φ,N,G)-complex glued to a filtered complex.

The gluing Hom complex has degree-n elements (a, b, c) with a in Hom♯ of the
Frobenius sides, b a filtered map of the de Rham sides and c a plain map of
degree n−1 from the Frobenius side to the de Rham side.  The differential is

    d(a, b, c) = (da, db, dc + (−1)^n (a_N∘a − b∘a_M))

and composition is (a′, b′, c′)(a, b, c) = (a′a, b′b, (−1)^n c′a + b′c) with n
the degree of (a, b, c).  These signs make d² = 0 and the Leibniz rule hold.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .chains import (
    ChainComplex,
    ComplexError,
    Elem,
    Layout,
    LayoutComplex,
    add_into,
    hom_differential,
    matrix_of,
    reynolds_subspace,
)
from .dfmod import DFComplex, FilteredPhiNModule, is_weakly_admissible
from .exactlin import Mat, Subspace, direct_sum, rref, solve
from .filtered import (
    FilteredComplex,
    FilteredSpace,
    cohomology_data,
    hom_dr,
    is_quasi_iso,
    kernel_of,
    truncate,
)
from .phimod import (
    GroupData,
    InvalidModule,
    ModuleComplex,
    PhiNModule,
    Violation,
    compose_sharp_blocks,
    sharp_range,
    sharp_total_d,
    tate_twist,
)


@dataclass(frozen=True)
class PadicHodgeComplex:
    m0: ModuleComplex
    mk: FilteredComplex
    a: tuple
    k_groups: tuple | None = None
    validate: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(self.a))
        if self.k_groups is not None:
            object.__setattr__(self, "k_groups", tuple(self.k_groups))
        if self.validate:
            problems = validate_pH(self)
            if problems:
                raise InvalidModule(problems)

    @property
    def p(self) -> int:
        return self.m0.p

    @property
    def degrees(self) -> range:
        return self.m0.degrees

    def a_at(self, n: int) -> Mat:
        k = n - self.m0.min_deg
        if 0 <= k < len(self.a):
            return self.a[k]
        return Mat.zeros(self.mk.dim(n), self.m0.dim(n))

    def k_group(self, n: int) -> GroupData | None:
        if self.k_groups is None:
            return None
        return self.k_groups[n - self.m0.min_deg]

    @property
    def group_order(self) -> int | None:
        return None if self.m0.groups is None else self.m0.groups[0].order


def validate_pH(m: PadicHodgeComplex) -> list[Violation]:
    """Empty when the degrees align, a is a chain map and a quasi-isomorphism."""
    out = []
    if m.m0.degrees != m.mk.degrees:
        return [Violation("degrees aligned", f"{list(m.m0.degrees)} vs {list(m.mk.degrees)}")]
    if len(m.a) != len(m.m0.modules):
        return [Violation("a per degree", "need one comparison matrix per degree")]
    for n in m.degrees:
        if m.a_at(n).shape != (m.mk.dim(n), m.m0.dim(n)):
            out.append(Violation("a shape", f"degree {n}"))
    if out:
        return out
    for n in m.degrees:
        if m.mk.d(n) @ m.a_at(n) != m.a_at(n + 1) @ m.m0.d(n):
            out.append(Violation("a chain map", f"a∘d ≠ d∘a in degree {n}"))
    if out:
        return out
    if (m.m0.groups is None) != (m.k_groups is None):
        out.append(Violation("group", "both sides carry a group action, or neither"))
    elif m.k_groups is not None:
        for n in m.degrees:
            for g0, gk in zip(m.m0.group(n).rep, m.k_group(n).rep):
                if m.a_at(n) @ g0 != gk @ m.a_at(n):
                    out.append(Violation("a equivariant", f"degree {n}"))
                    break
    f = {n: m.a_at(n) for n in m.degrees}
    if not is_quasi_iso(f, m.m0.underlying(), m.mk.underlying()):
        bad = [n for n in m.degrees if m.m0.underlying().h(n) != m.mk.underlying().h(n)]
        where = f"degree {bad[0]}" if bad else "on cohomology"
        out.append(Violation("a quasi-isomorphism", f"a is not a quasi-isomorphism ({where})"))
    return out


def theta(m) -> PadicHodgeComplex:
    """(M₀, M_K, comparison) for a complex of filtered (φ,N,G)-modules."""
    dc = DFComplex.of(m)
    groups = None
    if dc.has_group():
        groups = [x.galois.transported(x.comparison) for x in dc.modules]
    return PadicHodgeComplex(dc.sharp(), dc.dr(), [x.comparison for x in dc.modules], groups)


def unit_pH(p: int, group: GroupData | None = None) -> PadicHodgeComplex:
    return theta(FilteredPhiNModule.unit(p, group))


class HomPH(LayoutComplex):
    """Hom complex between two p-adic Hodge complexes."""

    def __init__(self, m: PadicHodgeComplex, t: PadicHodgeComplex):
        if m.p != t.p:
            raise ComplexError("p-adic Hodge complexes over different primes")
        if (m.group_order is None) != (t.group_order is None):
            raise ComplexError("both complexes must carry a group action, or neither")
        self.m, self.t = m, t
        lo, hi = sharp_range(m.m0, t.m0)
        super().__init__(lo, hi, self._layout, self._diff, self._constraint)

    def _layout(self, n: int) -> Layout:
        m, t = self.m, self.t
        blocks = []
        for k, parts in ((0, (0,)), (1, (0, 1)), (2, (0,))):
            for part in parts:
                for i in m.degrees:
                    blocks.append((("a", k, part, i), t.m0.dim(i + n - k), m.m0.dim(i)))
        for i in m.degrees:
            blocks.append((("b", i), t.mk.dim(i + n), m.mk.dim(i)))
        for i in m.degrees:
            blocks.append((("c", i), t.mk.dim(i + n - 1), m.m0.dim(i)))
        return Layout(blocks)

    def _diff(self, n: int, e: Elem) -> Elem:
        m, t = self.m, self.t
        out: dict = {}
        a = {key[1:]: x for key, x in e.items() if key[0] == "a"}
        for key, x in sharp_total_d(m.m0, t.m0, n, a).items():
            add_into(out, ("a",) + key, x)
        m0d = {i: m.m0.dim(i) for i in m.degrees}
        mkd = {i: m.mk.dim(i) for i in m.degrees}
        tkd = {j: t.mk.dim(j) for j in t.degrees}
        b = {("b", key[1]): x for key, x in e.items() if key[0] == "b"}
        for key, x in hom_differential(m.mk.d, t.mk.d, mkd, tkd, n, b, "b").items():
            add_into(out, key, x)
        c = {("c", key[1]): x for key, x in e.items() if key[0] == "c"}
        for key, x in hom_differential(m.m0.d, t.mk.d, m0d, tkd, n - 1, c, "c").items():
            add_into(out, key, x)
        sign = -1 if n % 2 else 1
        for key, x in e.items():
            if key[0] == "a" and key[1] == 0:
                i = key[3]
                add_into(out, ("c", i), (t.a_at(i + n) @ x).scale(sign))
            elif key[0] == "b":
                i = key[1]
                add_into(out, ("c", i), (x @ m.a_at(i)).scale(-sign))
        return out

    def _constraint(self, n: int) -> Subspace:
        lay = self.layouts[n]
        vs = []
        for key, r, c in lay.blocks:
            o = lay.offset[key]
            if key[0] == "b":
                i = key[1]
                basis = hom_dr(self.m.mk.term(i), self.t.mk.term(i + n)).basis
            else:
                basis = [tuple(Fraction(int(x == y)) for x in range(r * c)) for y in range(r * c)]
            for v in basis:
                w = [Fraction(0)] * lay.size
                w[o:o + r * c] = v
                vs.append(w)
        allowed = Subspace(lay.size, vs)
        if self.m.group_order is None:
            return allowed
        return allowed & reynolds_subspace(lay, [self._act(n, g) for g in range(self.m.group_order)])

    def _act(self, n: int, g: int):
        m, t = self.m, self.t

        def act(e: Elem) -> Elem:
            out = {}
            for key, x in e.items():
                i = key[-1]
                if key[0] == "a":
                    j = i + n - key[1]
                    out[key] = t.m0.group(j).rep[g] @ x @ m.m0.group(i).rep[g].inverse()
                elif key[0] == "b":
                    out[key] = t.k_group(i + n).rep[g] @ x @ m.k_group(i).rep[g].inverse()
                else:
                    out[key] = t.k_group(i + n - 1).rep[g] @ x @ m.m0.group(i).rep[g].inverse()
            return out
        return act


def hom_complex_pH(m: PadicHodgeComplex, t: PadicHodgeComplex) -> ChainComplex:
    return HomPH(m, t).chain


@dataclass(frozen=True)
class PHHomElement:
    """Degree-n element (a, b, c) of the gluing Hom complex, each part keyed by source degree."""

    degree: int
    a_part: dict
    b_part: dict
    c_part: dict

    @classmethod
    def from_elem(cls, degree: int, e: Elem) -> PHHomElement:
        parts = {"a": {}, "b": {}, "c": {}}
        for key, x in e.items():
            parts[key[0]][key[1:]] = x
        return cls(degree, parts["a"], parts["b"], parts["c"])

    def to_elem(self) -> Elem:
        out = {}
        for tag, part in (("a", self.a_part), ("b", self.b_part), ("c", self.c_part)):
            for key, x in part.items():
                out[(tag,) + key] = x
        return out


def compose_pH(y: Elem, ny: int, x: Elem, nx: int, p: int) -> Elem:
    """(a′, b′, c′)∘(a, b, c) = (a′a, b′b, (−1)^{nx} c′a + b′c) for x of degree nx."""
    out: dict = {}
    ya = {k[1:]: v for k, v in y.items() if k[0] == "a"}
    xa = {k[1:]: v for k, v in x.items() if k[0] == "a"}
    for key, v in compose_sharp_blocks(ya, ny, xa, nx, p).items():
        add_into(out, ("a",) + key, v)
    sign = -1 if nx % 2 else 1
    for key, v in x.items():
        if key[0] == "b":
            w = y.get(("b", key[1] + nx))
            if w is not None:
                add_into(out, ("b", key[1]), w @ v)
        elif key[0] == "a" and key[1] == 0:
            w = y.get(("c", key[3] + nx))
            if w is not None:
                add_into(out, ("c", key[3]), (w @ v).scale(sign))
        elif key[0] == "c":
            w = y.get(("b", key[1] + nx - 1))
            if w is not None:
                add_into(out, ("c", key[1]), w @ v)
    return out


def identity_element(m: PadicHodgeComplex) -> Elem:
    e = {}
    for i in m.degrees:
        e[("a", 0, 0, i)] = Mat.identity(m.m0.dim(i))
        e[("b", i)] = Mat.identity(m.mk.dim(i))
    return e


# Truncation, cohomology objects and admissibility.

def _module_truncate(c: ModuleComplex, mode: str, n: int) -> ModuleComplex:
    if mode == "le":
        k = kernel_of(c.d(n))
        mods = [c.module(i) for i in c.degrees if i < n]
        mods.append(_sub_module(c.module(n), k))
        diffs = [c.d(i) for i in c.degrees if i < n - 1]
        if n - 1 in c.degrees:
            diffs.append(solve(k.basis_matrix(), c.d(n - 1)) if k.dim else Mat.zeros(0, c.dim(n - 1)))
        groups = None
        if c.groups is not None:
            groups = [c.group(i) for i in c.degrees if i < n] + [_sub_group(c.group(n), k)]
        return ModuleComplex(c.min_deg, mods, diffs, groups, validate=False)
    ker = kernel_of(c.d(n - 1))
    q, s = ker.quotient_data()
    top = max(c.degrees)
    mods = [_quot_module(c.module(n - 1), q, s)] + [c.module(i) for i in c.degrees if i >= n]
    diffs = [c.d(n - 1) @ s] + [c.d(i) for i in c.degrees if n <= i < top]
    groups = None
    if c.groups is not None:
        g = c.group(n - 1)
        groups = [GroupData(g.order, g.mult_table, tuple(q @ r @ s for r in g.rep))]
        groups += [c.group(i) for i in c.degrees if i >= n]
    return ModuleComplex(n - 1, mods, diffs, groups, validate=False)


def _sub_module(m: PhiNModule, w: Subspace) -> PhiNModule:
    if w.dim == 0:
        return PhiNModule(m.p, Mat.zeros(0, 0), Mat.zeros(0, 0))
    return PhiNModule(m.p, w.restrict(m.phi), w.restrict(m.n_op))


def _sub_group(g: GroupData, w: Subspace) -> GroupData:
    reps = tuple(w.restrict(r) if w.dim else Mat.zeros(0, 0) for r in g.rep)
    return GroupData(g.order, g.mult_table, reps)


def _quot_module(m: PhiNModule, q: Mat, s: Mat) -> PhiNModule:
    return PhiNModule(m.p, q @ m.phi @ s, q @ m.n_op @ s)


def truncate_pH(m: PadicHodgeComplex, n: int, mode: str) -> PadicHodgeComplex:
    """Componentwise truncation τ≤n ("le") or τ≥n ("ge")."""
    lo, hi = min(m.degrees), max(m.degrees)
    if mode not in ("le", "ge"):
        raise ValueError(f"unknown truncation mode {mode!r}")
    if mode == "le" and n >= hi or mode == "ge" and n <= lo:
        return m
    if mode == "le" and n < lo or mode == "ge" and n > hi:
        return zero_pH(m.p, n, m.m0.groups[0] if m.m0.groups is not None else None)
    if mode == "le":
        k0, kk = kernel_of(m.m0.d(n)), kernel_of(m.mk.d(n))
        m0 = _module_truncate(m.m0, "le", n)
        mk = truncate(m.mk, "le", n)
        a = [m.a_at(i) for i in m.degrees if i < n]
        top = m.a_at(n) @ k0.basis_matrix() if k0.dim else Mat.zeros(m.mk.dim(n), 0)
        a.append(solve(kk.basis_matrix(), top) if kk.dim else Mat.zeros(0, k0.dim))
        kg = None
        if m.k_groups is not None:
            kg = [m.k_group(i) for i in m.degrees if i < n] + [_sub_group(m.k_group(n), kk)]
        return PadicHodgeComplex(m0, mk, a, kg)
    ker0, kerk = kernel_of(m.m0.d(n - 1)), kernel_of(m.mk.d(n - 1))
    q0, s0 = ker0.quotient_data()
    qk, sk = kerk.quotient_data()
    m0 = _module_truncate(m.m0, "ge", n)
    mk = truncate(m.mk, "ge", n)
    a = [qk @ m.a_at(n - 1) @ s0] + [m.a_at(i) for i in m.degrees if i >= n]
    kg = None
    if m.k_groups is not None:
        g = m.k_group(n - 1)
        kg = [GroupData(g.order, g.mult_table, tuple(qk @ r @ sk for r in g.rep))]
        kg += [m.k_group(i) for i in m.degrees if i >= n]
    return PadicHodgeComplex(m0, mk, a, kg)


def zero_pH(p: int, deg: int = 0, group: GroupData | None = None) -> PadicHodgeComplex:
    """The zero complex, concentrated in one degree."""
    z = Mat.zeros(0, 0)
    g = None if group is None else [GroupData(group.order, group.mult_table, (z,) * group.order)]
    m0 = ModuleComplex(deg, [PhiNModule(p, z, z)], [], g)
    return PadicHodgeComplex(m0, FilteredComplex(deg, [FilteredSpace(0, {})], []), [z], g)


def cohomology_module(m: PadicHodgeComplex, n: int) -> FilteredPhiNModule:
    """H^n as a filtered (φ,N,G)-module: H^n(M₀) with the filtration of H^n(M_K) via H^n(a)."""
    c0 = m.m0
    z0 = kernel_of(c0.d(n))
    im0 = Subspace(z0.dim, (z0.coordinates(v) for v in Subspace.span_columns(c0.d(n - 1)).basis)) if z0.dim else Subspace.zero(0)
    q0, s0 = im0.quotient_data()
    lift0 = (z0.basis_matrix() @ s0) if z0.dim else Mat.zeros(c0.dim(n), 0)
    mod = c0.module(n)

    def induced(op: Mat) -> Mat:
        if q0.rows == 0:
            return Mat.zeros(0, 0)
        return q0 @ solve(z0.basis_matrix(), op @ lift0)

    base = PhiNModule(m.p, induced(mod.phi), induced(mod.n_op))
    zk, qk, sk, fil = cohomology_data(m.mk, n)
    comp = Mat.zeros(0, 0)
    if q0.rows:
        comp = qk @ solve(zk.basis_matrix(), m.a_at(n) @ lift0)
    gal = None
    if c0.groups is not None:
        g = c0.group(n)
        gal = GroupData(g.order, g.mult_table, tuple(induced(r) for r in g.rep))
    return FilteredPhiNModule(base, fil, comp, gal, validate=False)


class NonStrictComplex(ValueError):
    pass


def is_admissible_pH(m: PadicHodgeComplex, seed: int | None = None) -> bool:
    ok, w = m.mk.is_strict()
    if not ok:
        n, i, v = w
        raise NonStrictComplex(f"de Rham differential in degree {n} is not strict at filtration step {i}")
    for n in m.degrees:
        h = cohomology_module(m, n)
        if h.dim and not is_weakly_admissible(h, seed=seed).admissible:
            return False
    return True


def theta_inv(m: PadicHodgeComplex) -> tuple[DFComplex, Elem]:
    """A complex E of filtered modules and a closed degree-0 quasi-isomorphism θ(E) → m.

    When a is an isomorphism in every degree, E carries a as its comparison and
    the morphism is the identity.  Otherwise M₀ is split as cohomology ⊕
    boundaries ⊕ complement, the cohomology part receives the filtration of
    H(M_K) through H(a), and the rest sits in filtration degree 0.
    """
    if not is_admissible_pH(m):
        raise ValueError("theta_inv needs an admissible p-adic Hodge complex")
    groups = m.m0.groups
    if all(m.a_at(n).is_invertible() for n in m.degrees):
        mods = [FilteredPhiNModule(m.m0.module(n), m.mk.term(n), m.a_at(n),
                                   None if groups is None else m.m0.group(n)) for n in m.degrees]
        return DFComplex(m.m0.min_deg, mods, m.m0.differentials), identity_element(m)
    mods, b = [], {}
    for n in m.degrees:
        fil0, b[n] = _split_filtration(m, n)
        mods.append(FilteredPhiNModule(m.m0.module(n), fil0, Mat.identity(m.m0.dim(n)),
                                       None if groups is None else m.m0.group(n)))
    e = DFComplex(m.m0.min_deg, mods, m.m0.differentials)
    elem = {}
    for n in m.degrees:
        elem[("a", 0, 0, n)] = Mat.identity(m.m0.dim(n))
        elem[("b", n)] = b[n]
    for n, h in _homotopy(m, b).items():
        elem[("c", n)] = h
    return e, elem


def _average(m: Mat, left: Sequence[Mat] | None, right: Sequence[Mat] | None) -> Mat:
    """(1/|G|) Σ ρ_L(g) m ρ_R(g)⁻¹; the identity when no group is given."""
    if not left:
        return m
    total = Mat.zeros(*m.shape)
    for gl, gr in zip(left, right):
        total = total + gl @ m @ gr.inverse()
    return total.scale(Fraction(1, len(left)))


def _equivariant_complement(big: Subspace, small: Subspace, reps) -> Subspace:
    """A complement of small inside big, stable under reps when both are."""
    n = big.ambient_dim
    extra = _extend(big, small)
    rest = _extend(Subspace.whole(n), big)
    basis = list(small.basis) + extra + rest
    change = Mat.from_columns(basis, n)
    keep = [Fraction(int(k < small.dim)) for k in range(n)]
    proj = change @ Mat.diag(keep) @ change.inverse()
    proj = _average(proj, reps, reps)
    return rref(proj).kernel & big


def _extend(big: Subspace, small: Subspace) -> list:
    acc, out = small, []
    for v in big.basis:
        if not acc.contains(v):
            out.append(v)
            acc = acc + Subspace(big.ambient_dim, [v])
    return out


def _split_filtration(m: PadicHodgeComplex, n: int) -> tuple[FilteredSpace, Mat]:
    """Filtration on M₀^n and a filtered chain map b: M₀^n → M_K^n inducing H(a)."""
    dim0 = m.m0.dim(n)
    if dim0 == 0:
        return FilteredSpace(0, {}), Mat.zeros(m.mk.dim(n), 0)
    r0 = m.m0.group(n).rep if m.m0.groups is not None else None
    rk = m.k_group(n).rep if m.k_groups is not None else None
    z = kernel_of(m.m0.d(n))
    bnd = Subspace.span_columns(m.m0.d(n - 1))
    h = _equivariant_complement(z, bnd, r0)
    rest = _equivariant_complement(Subspace.whole(dim0), z, r0)
    zk, qk, _, fil = cohomology_data(m.mk, n)
    reps = h.basis_matrix() if h.dim else Mat.zeros(dim0, 0)
    if h.dim:
        a_h = qk @ solve(zk.basis_matrix(), m.a_at(n) @ reps)
        fil_h = fil.push(a_h.inverse())
        b = _filtered_lifts(m.mk, n, zk, qk, fil) @ a_h
    else:
        fil_h = FilteredSpace(0, {})
        b = Mat.zeros(m.mk.dim(n), 0)
    # b is defined on h and vanishes on boundaries and the complement.
    coords = Mat.from_columns(list(h.basis) + list(bnd.basis) + list(rest.basis), dim0).inverse()
    b = b @ coords.submatrix(range(h.dim), range(dim0))
    b = _average(b, rk, r0)
    pieces = {}
    for i in sorted(set(fil_h.indices) | {0}):
        vs = [reps.apply(v) for v in fil_h.F(i).basis]
        if i <= 0:
            vs += list(bnd.basis) + list(rest.basis)
        pieces[i] = Subspace(dim0, vs)
    pieces[min(pieces)] = Subspace.whole(dim0)
    return FilteredSpace(dim0, pieces), b


def _filtered_lifts(c: FilteredComplex, n: int, zk: Subspace, qk: Mat, fil: FilteredSpace) -> Mat:
    """Cocycles lifting the standard basis of H^n(M_K), with F^i classes lifted into F^i."""
    dim_h = qk.rows
    zb = zk.basis_matrix()
    chosen = Subspace.zero(dim_h)
    cols_h, cols_lift = [], []
    steps = [(i, fil.F(i)) for i in sorted(fil.indices, reverse=True)]
    steps.append((None, Subspace.whole(dim_h)))
    for i, target in steps:
        cocycles = zk if i is None else c.term(n).F(i) & zk
        src = Mat.from_columns([zk.coordinates(w) for w in cocycles.basis], zk.dim)
        for v in target.basis:
            if chosen.contains(v):
                continue
            chosen = chosen + Subspace(dim_h, [v])
            coeff = solve(qk @ src, Mat.from_columns([v], dim_h))
            cols_h.append(v)
            cols_lift.append((zb @ src @ coeff).col(0))
    return Mat.from_columns(cols_lift, c.dim(n)) @ Mat.from_columns(cols_h, dim_h).inverse()


def _homotopy(m: PadicHodgeComplex, b: dict) -> dict:
    """c of degree −1 with d_K c + c d₀ = b − a, so that (id, b, c) is closed."""
    degs = list(m.degrees)
    src = Layout((n, m.mk.dim(n - 1), m.m0.dim(n)) for n in degs)
    tgt = Layout((n, m.mk.dim(n), m.m0.dim(n)) for n in degs)

    def dc(e):
        out = {}
        for n, x in e.items():
            add_into(out, n, m.mk.d(n - 1) @ x)
            if n - 1 in m.degrees:
                add_into(out, n - 1, x @ m.m0.d(n - 1))
        return out

    rhs = tgt.pack({n: b[n] - m.a_at(n) for n in degs})
    if src.size == 0:
        if any(rhs):
            raise ValueError("b and a differ on cohomology")
        return {}
    sol = solve(matrix_of(dc, src, tgt), Mat.from_columns([rhs], tgt.size))
    parts = src.unpack(sol.col(0))
    if m.m0.groups is None:
        return parts
    return {n: _average(x, m.k_group(n - 1).rep, m.m0.group(n).rep) for n, x in parts.items()}



def tate_twist_pH(m: PadicHodgeComplex, r: int) -> PadicHodgeComplex:
    return PadicHodgeComplex(m.m0.twisted(r), m.mk.shift_filtration(r), m.a, m.k_groups, validate=False)


def tensor_pH(x: PadicHodgeComplex, y: PadicHodgeComplex) -> PadicHodgeComplex:
    """Total tensor complex with d = d⊗1 + (−1)^i 1⊗d and a = a_x ⊗ a_y."""
    if x.p != y.p:
        raise ComplexError("different primes")
    lo = min(x.degrees) + min(y.degrees)
    hi = max(x.degrees) + max(y.degrees)
    pairs = {n: [(i, n - i) for i in x.degrees if n - i in y.degrees] for n in range(lo, hi + 1)}
    p = x.p
    mods, terms, amaps, groups, kgroups = [], [], [], [], []
    for n in range(lo, hi + 1):
        ps = pairs[n]
        phis, ns, fils, As, gs, kgs = [], [], [], [], [], []
        for i, j in ps:
            a, b = x.m0.module(i), y.m0.module(j)
            phis.append(a.phi.kron(b.phi))
            ns.append(a.n_op.kron(Mat.identity(b.dim)) + Mat.identity(a.dim).kron(b.n_op))
            fils.append(x.mk.term(i).tensor(y.mk.term(j)))
            As.append(x.a_at(i).kron(y.a_at(j)))
        mods.append(PhiNModule(p, direct_sum(*phis), direct_sum(*ns)))
        fil = fils[0]
        for f in fils[1:]:
            fil = fil.direct_sum(f)
        terms.append(fil)
        amaps.append(direct_sum(*As))
        if x.m0.groups is not None:
            order = x.group_order
            g0 = x.m0.groups[0]
            groups.append(GroupData(order, g0.mult_table, tuple(
                direct_sum(*[x.m0.group(i).rep[g].kron(y.m0.group(j).rep[g]) for i, j in ps]) for g in range(order))))
            kgroups.append(GroupData(order, g0.mult_table, tuple(
                direct_sum(*[x.k_group(i).rep[g].kron(y.k_group(j).rep[g]) for i, j in ps]) for g in range(order))))
    d0, dk = [], []
    for n in range(lo, hi):
        d0.append(_tensor_d(x.m0.d, y.m0.d, x.m0.dim, y.m0.dim, pairs[n], pairs[n + 1]))
        dk.append(_tensor_d(x.mk.d, y.mk.d, x.mk.dim, y.mk.dim, pairs[n], pairs[n + 1]))
    m0 = ModuleComplex(lo, mods, d0, groups or None)
    mk = FilteredComplex(lo, terms, dk)
    return PadicHodgeComplex(m0, mk, amaps, kgroups or None)


def _tensor_d(dx, dy, dimx, dimy, src_pairs, tgt_pairs) -> Mat:
    rows = [dimx(i) * dimy(j) for i, j in tgt_pairs]
    cols = [dimx(i) * dimy(j) for i, j in src_pairs]
    grid = [[None] * len(src_pairs) for _ in tgt_pairs]
    for s, (i, j) in enumerate(src_pairs):
        for t, (k, l) in enumerate(tgt_pairs):
            if k == i + 1 and l == j:
                grid[t][s] = dx(i).kron(Mat.identity(dimy(j)))
            elif k == i and l == j + 1:
                grid[t][s] = Mat.identity(dimx(i)).kron(dy(j)).scale(-1 if i % 2 else 1)
    return Mat.block(grid, rows, cols)


# Syntomic cohomology.

@dataclass
class SyntomicResult:
    complex: ChainComplex
    dims: list
    min_deg: int


def _fixed(space_dim: int, reps: Sequence[Mat] | None) -> Mat:
    """Basis (as columns) of the fixed vectors of a finite group action."""
    if reps is None:
        return Mat.identity(space_dim)
    total = reps[0]
    for r in reps[1:]:
        total = total + r
    s = Subspace.span_columns(total.scale(Fraction(1, len(reps))))
    return s.basis_matrix() if s.dim else Mat.zeros(space_dim, 0)


def syntomic_cone(m: PadicHodgeComplex, r: int) -> ChainComplex:
    """Cone(M♯₀ ⊕ F^r M_K → M_K)[−1], with M♯₀ the square of 1 − φ/p^r, 1 − φ/p^{r−1} and N.

    Degree n holds M♯₀^n ⊕ F^rM_K^n ⊕ M_K^{n−1}, where M♯₀^n = M₀^n ⊕ (M₀^{n−1})² ⊕ M₀^{n−2}.
    """
    p = m.p
    c0, ck = m.m0, m.mk
    degs = list(m.degrees)
    lo, hi = min(degs), max(degs) + 2

    # Fixed-point bases for the group, then F^r inside them.
    def inv0(n):
        return _fixed(c0.dim(n), c0.group(n).rep if c0.groups is not None and c0.module(n) else None)

    def invk(n):
        return _fixed(ck.dim(n), m.k_group(n).rep if m.k_groups is not None and ck.term(n).dim else None)

    def fr(n):
        base = invk(n)
        fsub = ck.term(n).F(r) & Subspace.span_columns(base) if base.cols else Subspace.zero(ck.dim(n))
        return fsub.basis_matrix() if fsub.dim else Mat.zeros(ck.dim(n), 0)

    def blocks(n):
        return [("x", n, inv0(n)), ("a", n - 1, inv0(n - 1)), ("b", n - 1, inv0(n - 1)),
                ("y", n - 2, inv0(n - 2)), ("f", n, fr(n)), ("k", n - 1, invk(n - 1))]

    def size(n):
        return [b[2].cols for b in blocks(n)]

    def ambient(kind, deg):
        return c0 if kind in "xaby" else ck

    def op_phi(deg, s):
        mod = c0.module(deg)
        return Mat.identity(mod.dim) - mod.phi.scale(Fraction(p) ** -s)

    def n_of(deg):
        return c0.module(deg).n_op

    diffs = []
    for n in range(lo, hi):
        src, tgt = blocks(n), blocks(n + 1)
        grid = [[None] * len(src) for _ in tgt]
        tindex = {b[0]: t for t, b in enumerate(tgt)}

        def put(tkind, skind, raw):
            si = [b[0] for b in src].index(skind)
            ti = tindex[tkind]
            sb, tb = src[si][2], tgt[ti][2]
            if sb.cols == 0 or tb.cols == 0:
                return
            val = solve(tb, raw @ sb)
            grid[ti][si] = val if grid[ti][si] is None else grid[ti][si] + val

        if c0.module(n):
            # square part: x ↦ (−(1−φ_r)x, N x); Hom part d x
            put("a", "x", -op_phi(n, r))
            put("b", "x", n_of(n))
            if c0.module(n + 1):
                put("x", "x", c0.d(n))
            # cone leg: a(x) into the glued slot
            put("k", "x", m.a_at(n))
        if c0.module(n - 1):
            put("y", "a", n_of(n - 1))
            put("y", "b", op_phi(n - 1, r - 1))
            if c0.module(n):
                put("a", "a", -c0.d(n - 1))
                put("b", "b", -c0.d(n - 1))
        if c0.module(n - 2) and c0.module(n - 1):
            put("y", "y", c0.d(n - 2))
        if ck.term(n).dim:
            if ck.term(n + 1).dim:
                put("f", "f", ck.d(n))
            put("k", "f", -Mat.identity(ck.dim(n)))
        if ck.term(n - 1).dim and ck.term(n).dim:
            put("k", "k", -ck.d(n - 1))
        diffs.append(Mat.block(grid, size(n + 1), size(n)))
    dims = [sum(size(n)) for n in range(lo, hi + 1)]
    return ChainComplex(lo, dims, diffs)


class RouteDisagreement(RuntimeError):
    """The two constructions of syntomic cohomology gave different answers."""


def syntomic_cohomology(m: PadicHodgeComplex, r: int) -> SyntomicResult:
    """Cohomology of the syntomic cone, cross-checked against Hom(K(0), m(r)).

    dims[k] is the dimension in degree min_deg + k, over the degrees of the cone.
    """
    cone = syntomic_cone(m, r)
    g = None
    if m.m0.groups is not None:
        g0 = m.m0.groups[0]
        g = GroupData(g0.order, g0.mult_table, (Mat.identity(1),) * g0.order)
    direct = hom_complex_pH(unit_pH(m.p, g), tate_twist_pH(m, r))
    lo = min(cone.min_deg, direct.min_deg)
    hi = max(cone.max_deg, direct.max_deg)
    via_cone = [cone.h(n) if n in cone.degrees else 0 for n in range(lo, hi + 1)]
    via_hom = [direct.h(n) if n in direct.degrees else 0 for n in range(lo, hi + 1)]
    if via_cone != via_hom:
        raise RouteDisagreement(f"cone gives {via_cone}, Hom(K(0), m(r)) gives {via_hom} from degree {lo}")
    return SyntomicResult(cone, cone.cohomology_dims(), cone.min_deg)
