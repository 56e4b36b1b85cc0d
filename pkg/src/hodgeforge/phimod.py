"""Frobenius modules, (φ,N)-modules and their derived Hom complexes.

The Hom complex of two (φ,N)-modules is the total complex of the square

    Hom --δ₁--> Hom
     |δ₂         |δ′₂
    Hom --δ′₁-> Hom

with δ₁x = φ₂x − xφ₁, δ′₁x = pφ₂x − xφ₁, δ₂x = N₂x − xN₁, δ′₂x = N₂x − pxN₁.
Total differentials: d⁰x = (δ₁x, δ₂x) and d¹(a, b) = δ′₂a − δ′₁b.
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
    ext_dims,
    reynolds_subspace,
)
from .exactlin import DimensionError, Mat, Subspace, left_right, rat

__all__ = [
    "ChainComplex", "ext_dims", "GroupData", "PhiModule", "PhiNModule", "ModuleComplex",
    "Violation", "InvalidModule", "validate_phin", "hom_sharp_phi", "hom_sharp_phiN",
    "hom_sharp", "SharpElement", "compose_sharp", "sharp_d", "tate_twist", "tensor", "dual",
]


class PrimeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    identity: str
    detail: str

    def __str__(self) -> str:
        return f"{self.identity}: {self.detail}"


class InvalidModule(ValueError):
    def __init__(self, violations: Sequence[Violation]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


@dataclass(frozen=True)
class GroupData:
    """Finite group given by a multiplication table, acting linearly through ``rep``."""

    order: int
    mult_table: tuple
    rep: tuple

    def __post_init__(self):
        object.__setattr__(self, "mult_table", tuple(tuple(r) for r in self.mult_table))
        object.__setattr__(self, "rep", tuple(self.rep))

    @classmethod
    def trivial(cls, dim: int) -> GroupData:
        return cls(1, ((0,),), (Mat.identity(dim),))

    def problems(self, dim: int) -> list[Violation]:
        out = []
        g = self.order
        if len(self.mult_table) != g or any(len(r) != g for r in self.mult_table):
            return [Violation("group table", "table is not order × order")]
        if len(self.rep) != g:
            return [Violation("group rep", "need one matrix per group element")]
        for m in self.rep:
            if m.shape != (dim, dim):
                return [Violation("group rep", f"matrix shape {m.shape} does not match dim {dim}")]
        for a in range(g):
            for b in range(g):
                c = self.mult_table[a][b]
                if not 0 <= c < g:
                    return [Violation("group table", f"entry {c} out of range")]
                if self.rep[c] != self.rep[a] @ self.rep[b]:
                    out.append(Violation("ρ(gh) = ρ(g)ρ(h)", f"fails for g={a}, h={b}"))
                    return out
        return out

    def transported(self, c: Mat) -> GroupData:
        ci = c.inverse()
        return GroupData(self.order, self.mult_table, tuple(c @ r @ ci for r in self.rep))


@dataclass(frozen=True)
class PhiModule:
    p: int
    phi: Mat

    @property
    def dim(self) -> int:
        return self.phi.rows


@dataclass(frozen=True)
class PhiNModule:
    p: int
    phi: Mat
    n_op: Mat = None

    def __post_init__(self):
        if self.n_op is None:
            object.__setattr__(self, "n_op", Mat.zeros(self.phi.rows, self.phi.rows))

    @property
    def dim(self) -> int:
        return self.phi.rows

    @classmethod
    def unit(cls, p: int) -> PhiNModule:
        return cls(p, Mat.identity(1), Mat.zeros(1, 1))

    def change_basis(self, g: Mat) -> PhiNModule:
        """The same module written in the basis given by the columns of g."""
        gi = g.inverse()
        return PhiNModule(self.p, gi @ self.phi @ g, gi @ self.n_op @ g)


def validate_phin(d: PhiNModule) -> list[Violation]:
    """Empty list when φ is invertible, Nφ = pφN and N is nilpotent."""
    out = []
    n = d.dim
    if d.phi.shape != (n, n) or d.n_op.shape != (n, n):
        return [Violation("shape", f"φ is {d.phi.shape}, N is {d.n_op.shape}")]
    if d.p < 2 or any(d.p % q == 0 for q in range(2, int(d.p ** 0.5) + 1)):
        out.append(Violation("p prime", f"p = {d.p} is not prime"))
    if not d.phi.is_invertible():
        out.append(Violation("φ invertible", "det φ = 0"))
    if d.n_op @ d.phi != (d.phi @ d.n_op).scale(d.p):
        out.append(Violation("Nφ ≠ pφN", "the monodromy relation fails"))
    if n and not d.n_op.power(n).is_zero():
        out.append(Violation("N nilpotent", f"N^{n} ≠ 0"))
    return out


def check_phin(d: PhiNModule) -> PhiNModule:
    v = validate_phin(d)
    if v:
        raise InvalidModule(v)
    return d


def _same_prime(*ms) -> int:
    ps = {m.p for m in ms}
    if len(ps) != 1:
        raise PrimeMismatch(f"modules over different primes {sorted(ps)}")
    return ps.pop()


def hom_sharp_phi(d1: PhiModule, d2: PhiModule) -> ChainComplex:
    """Two-term complex Hom → Hom, x ↦ φ₂x − xφ₁, in degrees 0 and 1."""
    _same_prime(d1, d2)
    h = d1.dim * d2.dim
    delta = left_right(d2.phi, Mat.identity(d1.dim)) - left_right(Mat.identity(d2.dim), d1.phi)
    return ChainComplex(0, (h, h), (delta,))


def delta_ops(d1: PhiNModule, d2: PhiNModule):
    """The four square maps (δ₁, δ′₁, δ₂, δ′₂) as matrices on row-major Hom(d1, d2)."""
    p = _same_prime(d1, d2)
    i1, i2 = Mat.identity(d1.dim), Mat.identity(d2.dim)
    x_phi1 = left_right(i2, d1.phi)
    x_n1 = left_right(i2, d1.n_op)
    phi2_x = left_right(d2.phi, i1)
    n2_x = left_right(d2.n_op, i1)
    return (phi2_x - x_phi1, phi2_x.scale(p) - x_phi1, n2_x - x_n1, n2_x - x_n1.scale(p))


def hom_sharp_phiN(d1: PhiNModule, d2: PhiNModule) -> ChainComplex:
    return hom_sharp(ModuleComplex.single(d1), ModuleComplex.single(d2)).chain


@dataclass(frozen=True)
class ModuleComplex:
    """Bounded complex of (φ,N)-modules with equivariant differentials."""

    min_deg: int
    modules: tuple
    differentials: tuple
    groups: tuple | None = None
    validate: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "modules", tuple(self.modules))
        object.__setattr__(self, "differentials", tuple(self.differentials))
        if self.groups is not None:
            object.__setattr__(self, "groups", tuple(self.groups))
        if self.validate:
            problems = self.problems()
            if problems:
                raise InvalidModule(problems)

    @classmethod
    def single(cls, m: PhiNModule, deg: int = 0, group: GroupData | None = None) -> ModuleComplex:
        return cls(deg, (m,), (), None if group is None else (group,))

    @property
    def p(self) -> int:
        return self.modules[0].p

    @property
    def degrees(self) -> range:
        return range(self.min_deg, self.min_deg + len(self.modules))

    def module(self, n: int) -> PhiNModule | None:
        k = n - self.min_deg
        return self.modules[k] if 0 <= k < len(self.modules) else None

    def dim(self, n: int) -> int:
        m = self.module(n)
        return m.dim if m else 0

    def dims(self) -> dict:
        return {n: self.dim(n) for n in self.degrees}

    def d(self, n: int) -> Mat:
        k = n - self.min_deg
        if 0 <= k < len(self.differentials):
            return self.differentials[k]
        return Mat.zeros(self.dim(n + 1), self.dim(n))

    def group(self, n: int) -> GroupData | None:
        if self.groups is None:
            return None
        return self.groups[n - self.min_deg]

    def underlying(self) -> ChainComplex:
        return ChainComplex(self.min_deg, [m.dim for m in self.modules], self.differentials, validate=False)

    def problems(self) -> list[Violation]:
        out = []
        if not self.modules:
            return [Violation("nonempty", "complex has no terms")]
        if len(self.differentials) != len(self.modules) - 1:
            return [Violation("shape", "need one differential between consecutive terms")]
        _same_prime(*self.modules)
        for n in self.degrees:
            for v in validate_phin(self.module(n)):
                out.append(Violation(v.identity, f"degree {n}: {v.detail}"))
        for n in self.degrees[:-1]:
            d = self.d(n)
            a, b = self.module(n), self.module(n + 1)
            if d.shape != (b.dim, a.dim):
                out.append(Violation("shape", f"differential in degree {n} has shape {d.shape}"))
                continue
            if d @ a.phi != b.phi @ d:
                out.append(Violation("dφ = φd", f"degree {n}"))
            if d @ a.n_op != b.n_op @ d:
                out.append(Violation("dN = Nd", f"degree {n}"))
            if n + 1 in self.degrees[:-1] and not (self.d(n + 1) @ d).is_zero():
                out.append(Violation("d∘d = 0", f"degree {n}"))
            if self.groups is not None:
                for g, (ra, rb) in enumerate(zip(self.group(n).rep, self.group(n + 1).rep)):
                    if d @ ra != rb @ d:
                        out.append(Violation("dρ = ρd", f"degree {n}, element {g}"))
                        break
        if self.groups is not None:
            if len(self.groups) != len(self.modules):
                return out + [Violation("group", "one group action per degree required")]
            tables = {g.mult_table for g in self.groups}
            if len(tables) != 1:
                out.append(Violation("group", "all degrees must carry the same group"))
            for n in self.degrees:
                gd, m = self.group(n), self.module(n)
                out.extend(gd.problems(m.dim))
                for r in gd.rep:
                    if r @ m.phi != m.phi @ r or r @ m.n_op != m.n_op @ r:
                        out.append(Violation("ρ commutes with φ, N", f"degree {n}"))
                        break
        return out

    def twisted(self, r: int) -> ModuleComplex:
        return ModuleComplex(self.min_deg, [tate_twist(m, r) for m in self.modules],
                             self.differentials, self.groups, validate=False)


# Hom♯ between complexes.  Block keys are (k, part, i): k is the position in
# the square (0, 1, 2), part distinguishes the φ-column (0) from the N-row (1)
# in the middle, and i is the source degree.  The block maps M^i to T^{i+n-k}.

def _sharp_blocks(m: ModuleComplex, t: ModuleComplex, n: int):
    for k, parts in ((0, (0,)), (1, (0, 1)), (2, (0,))):
        for part in parts:
            for i in m.degrees:
                yield (k, part, i), t.dim(i + n - k), m.dim(i)


def _deltas(mi: PhiNModule, tj: PhiNModule, p: int):
    return (
        lambda x: tj.phi @ x - x @ mi.phi,
        lambda x: (tj.phi @ x).scale(p) - x @ mi.phi,
        lambda x: tj.n_op @ x - x @ mi.n_op,
        lambda x: tj.n_op @ x - (x @ mi.n_op).scale(p),
    )


def sharp_total_d(m: ModuleComplex, t: ModuleComplex, n: int, e: Elem) -> Elem:
    """Total differential on Hom♯(m, t): square part plus (-1)^k times the Hom part."""
    p = m.p
    out: dict = {}
    for (k, part, i), x in e.items():
        j = i + n - k
        mi, tj = m.module(i), t.module(j)
        if mi is None or tj is None:
            continue
        d1, d1p, d2, d2p = _deltas(mi, tj, p)
        if k == 0:
            add_into(out, (1, 0, i), d1(x))
            add_into(out, (1, 1, i), d2(x))
        elif k == 1 and part == 0:
            add_into(out, (2, 0, i), d2p(x))
        elif k == 1:
            add_into(out, (2, 0, i), -d1p(x))
        sign = -1 if k % 2 else 1
        hom_deg = n - k
        if t.module(j + 1) is not None:
            add_into(out, (k, part, i), (t.d(j) @ x).scale(sign))
        if m.module(i - 1) is not None:
            add_into(out, (k, part, i - 1), (x @ m.d(i - 1)).scale(sign * (1 if hom_deg % 2 else -1)))
    return out


def sharp_range(m: ModuleComplex, t: ModuleComplex) -> tuple[int, int]:
    return (t.min_deg - max(m.degrees), max(t.degrees) - m.min_deg + 2)


def group_action_on_hom(gm: GroupData, gt: GroupData, g: int):
    rm_inv = gm.rep[g].inverse()
    rt = gt.rep[g]
    return rt, rm_inv


def sharp_constraint(m: ModuleComplex, t: ModuleComplex, layout_of):
    """Fixed points of the group acting on every Hom block, or None without a group."""
    if m.groups is None and t.groups is None:
        return None
    if m.groups is None or t.groups is None:
        raise ComplexError("both complexes must carry a group action, or neither")
    order = m.groups[0].order

    def constraint(n):
        lay = layout_of(n)
        acts = []
        for g in range(order):
            def act(e, g=g):
                out = {}
                for key, x in e.items():
                    i = key[-1]
                    j = i + n - (key[0] if len(key) == 3 else 0)
                    out[key] = t.group(j).rep[g] @ x @ m.group(i).rep[g].inverse()
                return out
            acts.append(act)
        return reynolds_subspace(lay, acts)

    return constraint


def hom_sharp(m: ModuleComplex, t: ModuleComplex) -> LayoutComplex:
    """Hom♯_{φ,N(,G)}(m, t) as an explicit complex of matrices."""
    _same_prime(*m.modules, *t.modules)
    lo, hi = sharp_range(m, t)

    def layout(n):
        return Layout(_sharp_blocks(m, t, n))

    return LayoutComplex(lo, hi, layout, lambda n, e: sharp_total_d(m, t, n, e),
                         sharp_constraint(m, t, layout))


@dataclass(frozen=True)
class SharpElement:
    """Element of the module-level Hom♯: parts = (x,), (a, b) or (c,) by degree."""

    degree: int
    parts: tuple

    def __post_init__(self):
        need = {0: 1, 1: 2, 2: 1}.get(self.degree)
        if need is None:
            raise ValueError(f"Hom♯ has no elements in degree {self.degree}")
        if len(self.parts) != need:
            raise ValueError(f"degree {self.degree} needs {need} matrix part(s)")


def sharp_d(x: SharpElement, d1: PhiNModule, d2: PhiNModule) -> SharpElement | None:
    """Differential of a module-level Hom♯ element; None in degree 2 (target is zero)."""
    p = _same_prime(d1, d2)
    dl1, dl1p, dl2, dl2p = _deltas(d1, d2, p)
    if x.degree == 0:
        return SharpElement(1, (dl1(x.parts[0]), dl2(x.parts[0])))
    if x.degree == 1:
        a, b = x.parts
        return SharpElement(2, (dl2p(a) - dl1p(b),))
    return None


def compose_sharp(g: SharpElement, f: SharpElement, p: int) -> SharpElement | None:
    """Product of Hom♯ elements; satisfies d(g∘f) = dg∘f + (-1)^deg(g) g∘df.

    Degree-one elements (a′, b′)∘(a, b) multiply to b′a − p·a′b; products of
    total degree above two vanish and are returned as None.
    """
    deg = g.degree + f.degree
    if deg > 2:
        return None
    if g.degree == 0:
        return SharpElement(deg, tuple(g.parts[0] @ y for y in f.parts))
    if f.degree == 0:
        return SharpElement(deg, tuple(y @ f.parts[0] for y in g.parts))
    (a2, b2), (a1, b1) = g.parts, f.parts
    return SharpElement(2, (b2 @ a1 - (a2 @ b1).scale(p),))


def tate_twist(d, r: int):
    """M(r): Frobenius divided by p^r, monodromy kept, filtration shifted by r."""
    if isinstance(d, PhiNModule):
        return PhiNModule(d.p, d.phi.scale(Fraction(1, d.p) ** r if r >= 0 else Fraction(d.p) ** (-r)), d.n_op)
    return d.twisted(r)


def tensor(d1, d2):
    if isinstance(d1, PhiNModule) and isinstance(d2, PhiNModule):
        _same_prime(d1, d2)
        i1, i2 = Mat.identity(d1.dim), Mat.identity(d2.dim)
        return PhiNModule(d1.p, d1.phi.kron(d2.phi), d1.n_op.kron(i2) + i1.kron(d2.n_op))
    return d1.tensor(d2)


def dual(d):
    if isinstance(d, PhiNModule):
        return PhiNModule(d.p, d.phi.T.inverse(), -d.n_op.T)
    return d.dual()


def compose_sharp_blocks(g: Elem, ng: int, f: Elem, nf: int, p: int) -> Elem:
    """Product of Hom♯ elements between complexes, in total degrees ng and nf.

    A block of square position k and Hom degree m = n − k; the product of blocks
    (k′, m′)·(k, m) carries the Koszul sign (−1)^{m′k}.
    """
    out: dict = {}
    for (k, part, i), x in f.items():
        j = i + nf - k
        for kk, pp in ((0, 0), (1, 0), (1, 1), (2, 0)):
            y = g.get((kk, pp, j))
            if y is None or k + kk > 2:
                continue
            sign = -1 if ((ng - kk) * k) % 2 else 1
            if kk == 0:
                add_into(out, (k, part, i), (y @ x).scale(sign))
            elif k == 0:
                add_into(out, (kk, pp, i), (y @ x).scale(sign))
            elif pp == 1 and part == 0:
                add_into(out, (2, 0, i), (y @ x).scale(sign))
            elif pp == 0 and part == 1:
                add_into(out, (2, 0, i), (y @ x).scale(-sign * p))
    return out
