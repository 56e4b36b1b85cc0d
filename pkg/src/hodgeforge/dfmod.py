"""Filtered (φ,N,G)-modules: weak admissibility, the Hom♭ complex and extensions.

Model: the residue field is F_p, so Frobenius is linear, and K = K₀.  The de
Rham side D_K is a second copy of the space, tied to D₀ by an invertible
comparison matrix.  A finite group acts linearly on D₀; on D_K it acts by the
transported action, and the filtration must be stable under it.
"""

from __future__ import annotations

import random
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
    reynolds_subspace,
)
from .exactlin import (
    Finite,
    InfiniteFamily,
    Mat,
    Subspace,
    algebra_basis,
    closure,
    direct_sum,
    invariant_subspaces,
    rref,
    solve,
    vp,
)
from .filtered import FilteredComplex, FilteredMap, FilteredSpace, hom_dr, is_strict
from .phimod import (
    GroupData,
    InvalidModule,
    ModuleComplex,
    PhiNModule,
    Violation,
    _same_prime,
    sharp_range,
    sharp_total_d,
    validate_phin,
)

__all__ = [
    "GroupData", "FilteredPhiNModule", "DFComplex", "AdmissibilityVerdict", "t_N",
    "is_weakly_admissible", "hom_flat", "h_st", "h_st_dims", "build_extension", "kernel_cokernel",
]


@dataclass(frozen=True)
class FilteredPhiNModule:
    base: PhiNModule
    dr_side: FilteredSpace
    comparison: Mat = None
    galois: GroupData | None = None
    validate: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        if self.comparison is None:
            object.__setattr__(self, "comparison", Mat.identity(self.base.dim))
        if self.validate:
            problems = self.problems()
            if problems:
                raise InvalidModule(problems)

    @classmethod
    def unit(cls, p: int, group: GroupData | None = None) -> FilteredPhiNModule:
        g = None if group is None else GroupData(group.order, group.mult_table, (Mat.identity(1),) * group.order)
        return cls(PhiNModule.unit(p), FilteredSpace.trivial(1), Mat.identity(1), g)

    @property
    def p(self) -> int:
        return self.base.p

    @property
    def dim(self) -> int:
        return self.base.dim

    @property
    def phi(self) -> Mat:
        return self.base.phi

    @property
    def n_op(self) -> Mat:
        return self.base.n_op

    def problems(self) -> list[Violation]:
        out = list(validate_phin(self.base))
        if self.dr_side.dim != self.dim:
            out.append(Violation("dim D_K = dim D₀", f"{self.dr_side.dim} ≠ {self.dim}"))
            return out
        if self.comparison.shape != (self.dim, self.dim) or not self.comparison.is_invertible():
            out.append(Violation("comparison invertible", "comparison D₀ → D_K is not an isomorphism"))
            return out
        if self.galois is not None:
            out.extend(self.galois.problems(self.dim))
            if not out:
                for r in self.galois.rep:
                    if r @ self.phi != self.phi @ r or r @ self.n_op != self.n_op @ r:
                        out.append(Violation("ρ commutes with φ, N", "group action is not equivariant"))
                        break
                fil = self.filtration_on_base()
                for r in self.galois.rep:
                    if any(not s.is_invariant(r) for s in fil.jumps.values()):
                        out.append(Violation("filtration G-stable", "group does not preserve the filtration"))
                        break
        return out

    def filtration_on_base(self) -> FilteredSpace:
        """The filtration pulled back to D₀ through the comparison."""
        return self.dr_side.push(self.comparison.inverse())

    def normalized(self) -> FilteredPhiNModule:
        """Same module with D_K identified with D₀ (comparison = identity)."""
        return FilteredPhiNModule(self.base, self.filtration_on_base(), Mat.identity(self.dim), self.galois,
                                  validate=False)

    def generators(self) -> list[Mat]:
        gens = [self.phi, self.n_op]
        if self.galois is not None:
            gens.extend(self.galois.rep)
        return gens

    def twisted(self, r: int) -> FilteredPhiNModule:
        from .phimod import tate_twist
        return FilteredPhiNModule(tate_twist(self.base, r), self.dr_side.shift(r), self.comparison, self.galois,
                                  validate=False)

    def tensor(self, other: FilteredPhiNModule) -> FilteredPhiNModule:
        from .phimod import tensor
        g = None
        if self.galois is not None or other.galois is not None:
            a = self.galois or GroupData(other.galois.order, other.galois.mult_table,
                                         (Mat.identity(self.dim),) * other.galois.order)
            b = other.galois or GroupData(a.order, a.mult_table, (Mat.identity(other.dim),) * a.order)
            g = GroupData(a.order, a.mult_table, tuple(x.kron(y) for x, y in zip(a.rep, b.rep)))
        return FilteredPhiNModule(tensor(self.base, other.base), self.dr_side.tensor(other.dr_side),
                                  self.comparison.kron(other.comparison), g)

    def dual(self) -> FilteredPhiNModule:
        from .phimod import dual
        g = None
        if self.galois is not None:
            g = GroupData(self.galois.order, self.galois.mult_table,
                          tuple(r.T.inverse() for r in self.galois.rep))
        return FilteredPhiNModule(dual(self.base), self.dr_side.dual(), self.comparison.T.inverse(), g)

    def direct_sum(self, other: FilteredPhiNModule) -> FilteredPhiNModule:
        _same_prime(self.base, other.base)
        g = None
        if self.galois is not None and other.galois is not None:
            g = GroupData(self.galois.order, self.galois.mult_table,
                          tuple(direct_sum(a, b) for a, b in zip(self.galois.rep, other.galois.rep)))
        base = PhiNModule(self.p, direct_sum(self.phi, other.phi), direct_sum(self.n_op, other.n_op))
        return FilteredPhiNModule(base, self.dr_side.direct_sum(other.dr_side),
                                  direct_sum(self.comparison, other.comparison), g)

    def change_basis(self, g: Mat, h: Mat | None = None) -> FilteredPhiNModule:
        """Isomorphic copy: D₀ rewritten in the columns of g, D_K in the columns of h."""
        h = Mat.identity(self.dim) if h is None else h
        gal = None
        if self.galois is not None:
            gi = g.inverse()
            gal = GroupData(self.galois.order, self.galois.mult_table, tuple(gi @ r @ g for r in self.galois.rep))
        return FilteredPhiNModule(self.base.change_basis(g), self.dr_side.push(h.inverse()),
                                  h.inverse() @ self.comparison @ g, gal)


@dataclass(frozen=True)
class DFComplex:
    """Bounded complex of filtered (φ,N,G)-modules; differentials act on D₀."""

    min_deg: int
    modules: tuple
    differentials: tuple
    validate: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "modules", tuple(self.modules))
        object.__setattr__(self, "differentials", tuple(self.differentials))
        if self.validate:
            self.sharp()
            self.dr()

    @classmethod
    def single(cls, m: FilteredPhiNModule, deg: int = 0) -> DFComplex:
        return cls(deg, (m,), ())

    @classmethod
    def of(cls, x) -> DFComplex:
        return x if isinstance(x, DFComplex) else cls.single(x)

    @property
    def p(self) -> int:
        return self.modules[0].p

    @property
    def degrees(self) -> range:
        return range(self.min_deg, self.min_deg + len(self.modules))

    def module(self, n: int) -> FilteredPhiNModule | None:
        k = n - self.min_deg
        return self.modules[k] if 0 <= k < len(self.modules) else None

    def dim(self, n: int) -> int:
        m = self.module(n)
        return m.dim if m else 0

    def d(self, n: int) -> Mat:
        k = n - self.min_deg
        if 0 <= k < len(self.differentials):
            return self.differentials[k]
        return Mat.zeros(self.dim(n + 1), self.dim(n))

    def has_group(self) -> bool:
        flags = {m.galois is not None for m in self.modules}
        if len(flags) > 1:
            raise ComplexError("either every term carries a group action or none does")
        return flags.pop()

    def sharp(self) -> ModuleComplex:
        groups = [m.galois for m in self.modules] if self.has_group() else None
        return ModuleComplex(self.min_deg, [m.base for m in self.modules], self.differentials, groups)

    def dr(self) -> FilteredComplex:
        diffs = [self.module(n + 1).comparison @ self.d(n) @ self.module(n).comparison.inverse()
                 for n in self.degrees[:-1]]
        return FilteredComplex(self.min_deg, [m.dr_side for m in self.modules], diffs)

    def comparison(self, n: int) -> Mat:
        m = self.module(n)
        return m.comparison if m else Mat.zeros(0, 0)

    def twisted(self, r: int) -> DFComplex:
        return DFComplex(self.min_deg, [m.twisted(r) for m in self.modules], self.differentials)


@dataclass(frozen=True)
class AdmissibilityVerdict:
    status: str
    t_N: int
    t_H: int
    witness: Subspace | None = None
    trials: int | None = None
    seed: int | None = None

    @property
    def admissible(self) -> bool:
        return self.status in ("Admissible", "ProbablyAdmissible")

    def summary(self) -> str:
        if self.status == "NotAdmissible":
            if self.witness is not None and self.witness.dim < self.witness.ambient_dim:
                return (f"NotAdmissible: subobject of dim {self.witness.dim} has "
                        f"t_N={self.sub_t_N} < t_H={self.sub_t_H}")
            rel = "<" if self.t_N < self.t_H else ">"
            return f"NotAdmissible: t_N={self.t_N} {rel} t_H={self.t_H}"
        if self.status == "ProbablyAdmissible":
            return f"ProbablyAdmissible: t_N=t_H={self.t_N}, {self.trials} random subobjects passed (seed {self.seed})"
        return f"Admissible: t_N=t_H={self.t_N}"

    sub_t_N: int | None = None
    sub_t_H: int | None = None


def t_N(d: FilteredPhiNModule) -> int:
    det = d.phi.det()
    if det == 0:
        raise ValueError("Frobenius is not invertible")
    return vp(det, d.p)


def sub_numbers(d: FilteredPhiNModule, w: Subspace, fil: FilteredSpace | None = None) -> tuple[int, int]:
    """(t_N, t_H) of a stable subspace W ⊆ D₀ with the filtration induced through the comparison."""
    if w.dim == 0:
        return 0, 0
    fil = fil or d.filtration_on_base()
    tn = vp(w.restrict(d.phi).det(), d.p)
    th = fil.induced_on(w).t_H()
    return tn, th


def is_weakly_admissible(d: FilteredPhiNModule, seed: int | None = None, trials: int = 1000) -> AdmissibilityVerdict:
    """Exact subobject scan when the stable lattice is finite, sampled scan otherwise."""
    tn, th = t_N(d), d.dr_side.t_H()
    whole = Subspace.whole(d.dim)
    if tn != th:
        return AdmissibilityVerdict("NotAdmissible", tn, th, whole, sub_t_N=tn, sub_t_H=th)
    fil = d.filtration_on_base()
    lattice = invariant_subspaces(d.generators(), d.dim)
    if isinstance(lattice, Finite):
        for w in lattice.subspaces:
            a, b = sub_numbers(d, w, fil)
            if a < b:
                return AdmissibilityVerdict("NotAdmissible", tn, th, w, sub_t_N=a, sub_t_H=b)
        return AdmissibilityVerdict("Admissible", tn, th)
    return _sampled_scan(d, lattice, fil, tn, th, seed, trials)


def _sampled_scan(d, family: InfiniteFamily, fil, tn, th, seed, trials) -> AdmissibilityVerdict:
    seed = 0 if seed is None else seed
    rng = random.Random(seed)
    gens = d.generators()
    n = d.dim
    seen: dict = {}
    pool: list[Subspace] = []
    for t in range(max(trials, 1000)):
        kind = rng.random()
        if family.component is not None and kind < 0.4:
            s = family.member(rng.randint(-30, 30))
            w = closure(s.basis, gens, n)
        else:
            k = rng.choice((1, 1, 2))
            vs = [[rng.randint(-3, 3) if rng.random() < 0.6 else 0 for _ in range(n)] for _ in range(k)]
            w = closure(vs, gens, n)
            if pool and rng.random() < 0.3:
                w = w + rng.choice(pool)
        if w not in seen:
            seen[w] = sub_numbers(d, w, fil)
            pool.append(w)
        a, b = seen[w]
        if a < b:
            return AdmissibilityVerdict("NotAdmissible", tn, th, w, seed=seed, sub_t_N=a, sub_t_H=b)
    return AdmissibilityVerdict("ProbablyAdmissible", tn, th, trials=max(trials, 1000), seed=seed)


# Hom♭(M, T): blocks ("s", k, part, i) for Hom♯, ("dr", i) for filtered maps of
# the de Rham sides and ("g", i) for the glued term Hom(M₀^i, T₀^{i+n-1}).
# The gluing term is written in D₀ coordinates; a de Rham map b enters it as
# c_T⁻¹ b c_M.  d(a, b, c) = (Da, Db, can(b) − can(a) − Dc).

class HomFlat(LayoutComplex):
    def __init__(self, m: DFComplex, t: DFComplex):
        _same_prime(*(x.base for x in m.modules), *(x.base for x in t.modules))
        self.m, self.t = m, t
        self.ms, self.ts = m.sharp(), t.sharp()
        self.mk, self.tk = m.dr(), t.dr()
        lo, hi = sharp_range(self.ms, self.ts)
        self.group = m.has_group()
        if self.group != t.has_group():
            raise ComplexError("both complexes must carry a group action, or neither")
        super().__init__(lo, hi, self._layout, self._diff, self._constraint)

    def _layout(self, n: int) -> Layout:
        m, t = self.m, self.t
        blocks = []
        for k, parts in ((0, (0,)), (1, (0, 1)), (2, (0,))):
            for part in parts:
                for i in m.degrees:
                    blocks.append((("s", k, part, i), t.dim(i + n - k), m.dim(i)))
        for i in m.degrees:
            blocks.append((("dr", i), t.dim(i + n), m.dim(i)))
        for i in m.degrees:
            blocks.append((("g", i), t.dim(i + n - 1), m.dim(i)))
        return Layout(blocks)

    def can_sharp(self, n: int, e: Elem) -> Elem:
        return {("g", key[3]): x for key, x in e.items() if key[0] == "s" and key[1] == 0}

    def can_dr(self, n: int, e: Elem) -> Elem:
        out = {}
        for key, x in e.items():
            if key[0] == "dr":
                i = key[1]
                out[("g", i)] = self.t.comparison(i + n).inverse() @ x @ self.m.comparison(i)
        return out

    def _diff(self, n: int, e: Elem) -> Elem:
        out: dict = {}
        sharp = {key[1:]: x for key, x in e.items() if key[0] == "s"}
        for key, x in sharp_total_d(self.ms, self.ts, n, sharp).items():
            add_into(out, ("s",) + key, x)
        dr = {("dr", key[1]): x for key, x in e.items() if key[0] == "dr"}
        md, td = {i: self.m.dim(i) for i in self.m.degrees}, {j: self.t.dim(j) for j in self.t.degrees}
        for key, x in hom_differential(self.mk.d, self.tk.d, md, td, n, dr, "dr").items():
            add_into(out, key, x)
        glued = {("g", key[1]): x for key, x in e.items() if key[0] == "g"}
        for key, x in hom_differential(self.ms.d, self.ts.d, md, td, n - 1, glued, "g").items():
            add_into(out, key, -x)
        for key, x in self.can_dr(n, e).items():
            add_into(out, key, x)
        for key, x in self.can_sharp(n, e).items():
            add_into(out, key, -x)
        return out

    def _constraint(self, n: int) -> Subspace:
        lay = self.layouts[n] if hasattr(self, "layouts") and n in self.layouts else self._layout(n)
        filt = []
        for key, r, c in lay.blocks:
            if key[0] == "dr":
                i = key[1]
                filt.append((key, hom_dr(self.mk.term(i), self.tk.term(i + n))))
        vs = []
        for key, r, c in lay.blocks:
            o = lay.offset[key]
            if key[0] == "dr":
                sub = dict(filt)[key]
                basis = sub.basis
            else:
                basis = [tuple(Fraction(int(a == b)) for a in range(r * c)) for b in range(r * c)]
            for v in basis:
                w = [Fraction(0)] * lay.size
                w[o:o + r * c] = v
                vs.append(w)
        allowed = Subspace(lay.size, vs)
        if not self.group:
            return allowed
        return allowed & reynolds_subspace(lay, [self._act(n, g) for g in range(self.m.modules[0].galois.order)])

    def _act(self, n: int, g: int):
        def act(e: Elem) -> Elem:
            out = {}
            for key, x in e.items():
                i = key[-1]
                if key[0] == "s":
                    j, src, tgt = i + n - key[1], self.m.module(i), self.t.module(i + n - key[1])
                    out[key] = tgt.galois.rep[g] @ x @ src.galois.rep[g].inverse()
                elif key[0] == "g":
                    src, tgt = self.m.module(i), self.t.module(i + n - 1)
                    out[key] = tgt.galois.rep[g] @ x @ src.galois.rep[g].inverse()
                else:
                    src, tgt = self.m.module(i), self.t.module(i + n)
                    rt = tgt.comparison @ tgt.galois.rep[g] @ tgt.comparison.inverse()
                    rm = src.comparison @ src.galois.rep[g].inverse() @ src.comparison.inverse()
                    out[key] = rt @ x @ rm
            return out
        return act


def hom_flat(m, t) -> ChainComplex:
    return HomFlat(DFComplex.of(m), DFComplex.of(t)).chain


def unit_like(d) -> DFComplex:
    dc = DFComplex.of(d)
    g = dc.modules[0].galois
    return DFComplex.single(FilteredPhiNModule.unit(dc.p, g))


def h_st_dims(d) -> list[int]:
    """dim H^i(Hom♭(unit, d)) for i = 0, 1, 2 (degree-0 input) or over the full range."""
    c = hom_flat(unit_like(d), DFComplex.of(d))
    return [c.h(i) for i in range(0, max(c.max_deg, 2) + 1)]


def h_st(d, i: int) -> int:
    c = hom_flat(unit_like(d), DFComplex.of(d))
    return c.h(i)


@dataclass
class Extension:
    e: DFComplex
    inclusion: dict
    projection: dict
    xi: dict
    f_xi: dict


def build_extension(u: dict, j: int, m: DFComplex, t: DFComplex) -> Extension:
    """Extension 0 → T → E → Cone(id_M)[−j−1] → 0 whose filtration is twisted by u.

    ``u[i]`` maps M₀^i → T₀^{i+j} (D₀ coordinates) and must commute with the group.
    E^{i+j} = T^{i+j} ⊕ M^{i−1} ⊕ M^i with d_E(t, y, x) = (d_T t, d_M y − x, −d_M x).
    """
    m, t = DFComplex.of(m), DFComplex.of(t)
    for i, ui in u.items():
        if ui.shape != (t.dim(i + j), m.dim(i)):
            raise ValueError(f"u^{i} has shape {ui.shape}, expected {(t.dim(i + j), m.dim(i))}")
        src, tgt = m.module(i), t.module(i + j)
        if src is not None and tgt is not None and src.galois is not None:
            for a, b in zip(src.galois.rep, tgt.galois.rep):
                if b @ ui != ui @ a:
                    raise ValueError(f"u^{i} is not group-equivariant")

    def ui(i):
        return u.get(i, Mat.zeros(t.dim(i + j), m.dim(i)))

    degs = set(t.degrees) | {i + j for i in m.degrees} | {i + 1 + j for i in m.degrees}
    lo, hi = min(degs), max(degs)
    p = t.p
    mods, diffs = [], []
    for s in range(lo, hi + 1):
        i = s - j
        dt, dy, dx = t.dim(s), m.dim(i - 1), m.dim(i)
        size = dt + dy + dx
        parts = [x for x in (t.module(s), m.module(i - 1), m.module(i)) if x is not None]
        phi = direct_sum(*[x.phi for x in parts]) if parts else Mat.zeros(0, 0)
        nop = direct_sum(*[x.n_op for x in parts]) if parts else Mat.zeros(0, 0)
        gal = None
        if parts and parts[0].galois is not None:
            g0 = parts[0].galois
            gal = GroupData(g0.order, g0.mult_table,
                            tuple(direct_sum(*[x.galois.rep[g] for x in parts]) for g in range(g0.order)))
        fil = _extension_filtration(m, t, ui, s, j, size)
        mods.append(FilteredPhiNModule(PhiNModule(p, phi, nop), fil, Mat.identity(size), gal, validate=False))
    for s in range(lo, hi):
        i = s - j
        sizes_s = (t.dim(s), m.dim(i - 1), m.dim(i))
        sizes_n = (t.dim(s + 1), m.dim(i), m.dim(i + 1))
        grid = [[t.d(s), None, None],
                [None, m.d(i - 1), -Mat.identity(m.dim(i))],
                [None, None, -m.d(i)]]
        diffs.append(Mat.block(grid, sizes_n, sizes_s))
    e = DFComplex(lo, mods, diffs)
    inclusion, projection, xi, f_xi = {}, {}, {}, {}
    for s in range(lo, hi + 1):
        i = s - j
        sizes = (t.dim(s), m.dim(i - 1), m.dim(i))
        inclusion[s] = Mat.block([[Mat.identity(sizes[0])], [None], [None]], sizes, (sizes[0],))
        projection[s] = Mat.block([[None, Mat.identity(sizes[1]), None], [None, None, Mat.identity(sizes[2])]],
                                  sizes[1:], sizes)
    for i in m.degrees:
        s = i + j
        sizes = (t.dim(s), m.dim(i - 1), m.dim(i))
        a = Mat.block([[None], [None], [Mat.identity(sizes[2])]], sizes, (sizes[2],))
        b = Mat.block([[ui(i)], [None], [Mat.identity(sizes[2])]], sizes, (sizes[2],))
        xi[i] = (a, b)
        # can_dr(b) − can♯(a): E has identity comparison, so both are plain matrices.
        f_xi[i] = b - a
        expected = Mat.block([[ui(i)], [None], [None]], sizes, (sizes[2],))
        assert f_xi[i] == expected, "f(ξ) must equal (u, 0, 0)"
    return Extension(e, inclusion, projection, xi, f_xi)


def _extension_filtration(m: DFComplex, t: DFComplex, ui, s: int, j: int, size: int) -> FilteredSpace:
    i = s - j
    dt, dy, dx = t.dim(s), m.dim(i - 1), m.dim(i)
    tf = t.module(s).filtration_on_base() if t.module(s) else FilteredSpace(0, {})
    mf = m.module(i).filtration_on_base() if m.module(i) else FilteredSpace(0, {})
    mf1 = m.module(i - 1).filtration_on_base() if m.module(i - 1) else FilteredSpace(0, {})
    idx = set(tf.indices) | set(mf.indices) | set(mf1.indices)
    if not idx:
        return FilteredSpace(size, {0: Subspace.whole(size)}) if size else FilteredSpace(0, {})
    z = Fraction(0)
    pieces = {}
    for nn in sorted(idx):
        vs = []
        for v in tf.F(nn).basis:
            vs.append(tuple(v) + (z,) * (dy + dx))
        for x in mf.F(nn).basis:
            vs.append(ui(i).apply(x) + (z,) * dy + tuple(x))
        for x in mf1.F(nn).basis:
            top = t.d(s - 1).apply(ui(i - 1).apply(x)) if dt else ()
            vs.append(tuple(top) + tuple(-a for a in x) + tuple(-a for a in m.d(i - 1).apply(x)))
        pieces[nn] = Subspace(size, vs)
    return FilteredSpace(size, pieces)


@dataclass
class KerCoker:
    kernel: FilteredPhiNModule
    cokernel: FilteredPhiNModule
    strict: bool
    witness: tuple | None
    kernel_inclusion: Mat
    cokernel_projection: Mat


def morphism_problems(f: Mat, src: FilteredPhiNModule, tgt: FilteredPhiNModule) -> list[str]:
    out = []
    if f.shape != (tgt.dim, src.dim):
        return ["shape mismatch"]
    if f @ src.phi != tgt.phi @ f:
        out.append("fφ ≠ φf")
    if f @ src.n_op != tgt.n_op @ f:
        out.append("fN ≠ Nf")
    if src.galois is not None and tgt.galois is not None:
        if any(f @ a != b @ f for a, b in zip(src.galois.rep, tgt.galois.rep)):
            out.append("fρ ≠ ρf")
    if not FilteredMap(src.filtration_on_base(), tgt.filtration_on_base(), f).is_filtered():
        out.append("f does not preserve the filtration")
    return out


def kernel_cokernel(f: Mat, src: FilteredPhiNModule, tgt: FilteredPhiNModule) -> KerCoker:
    """Kernel and cokernel of an equivariant filtered morphism given on D₀."""
    problems = morphism_problems(f, src, tgt)
    if problems:
        raise ValueError("not a morphism: " + "; ".join(problems))
    fs, ft = src.filtration_on_base(), tgt.filtration_on_base()
    ker = rref(f).kernel
    k_incl = ker.basis_matrix() if ker.dim else Mat.zeros(src.dim, 0)

    def gal_sub(g: GroupData | None, w: Subspace):
        if g is None:
            return None
        return GroupData(g.order, g.mult_table, tuple(w.restrict(r) for r in g.rep))

    kmod = FilteredPhiNModule(PhiNModule(src.p, ker.restrict(src.phi), ker.restrict(src.n_op)),
                              fs.induced_on(ker), Mat.identity(ker.dim), gal_sub(src.galois, ker), validate=False)
    im = Subspace.span_columns(f)
    q, s = im.quotient_data()
    cgal = None
    if tgt.galois is not None:
        cgal = GroupData(tgt.galois.order, tgt.galois.mult_table, tuple(q @ r @ s for r in tgt.galois.rep))
    cmod = FilteredPhiNModule(PhiNModule(tgt.p, q @ tgt.phi @ s, q @ tgt.n_op @ s),
                              ft.image_under(q) if q.rows else FilteredSpace(0, {}), Mat.identity(q.rows), cgal,
                              validate=False)
    ok, w = is_strict(FilteredMap(fs, ft, f))
    return KerCoker(kmod, cmod, ok, w, k_incl, q)


def equivariant_filtered_maps(src: FilteredPhiNModule, tgt: FilteredPhiNModule) -> Subspace:
    """Morphisms src → tgt on D₀ (row-major flattened), computed by intersecting kernels."""
    from .exactlin import left_right
    from .phimod import delta_ops
    d1, _, d2, _ = delta_ops(src.base, tgt.base)
    eq = rref(Mat.block([[d1], [d2]], [d1.rows, d2.rows], [d1.cols])).kernel
    fil = hom_dr(src.filtration_on_base(), tgt.filtration_on_base())
    out = eq & fil
    if src.galois is not None:
        rows = [left_right(b, Mat.identity(src.dim)) - left_right(Mat.identity(tgt.dim), a)
                for a, b in zip(src.galois.rep, tgt.galois.rep)]
        g = rref(Mat.block([[r] for r in rows], [r.rows for r in rows], [rows[0].cols])).kernel
        out = out & g
    return out
