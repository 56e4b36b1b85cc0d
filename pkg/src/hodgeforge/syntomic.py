"""Syntomic descent spectral sequence, E₂-degeneration checks and the Bloch–Kato complex.

Spectral sequences are computed from a filtered cochain complex by the
subquotient formula

    E_r^p = Z_r^p / (Z_{r−1}^{p+1} + D Z_{r−1}^{p−r+1}),   Z_r^p = F^p ∩ D⁻¹(F^{p+r}),

one total degree at a time.  E_r^{p,q} sits in total degree p + q.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .chains import ChainComplex, ComplexError
from .dfmod import DFComplex, FilteredPhiNModule, HomFlat, unit_like
from .exactlin import Mat, Subspace, hstack, rref, solve, vstack
from .phodge import cohomology_module, theta

__all__ = [
    "SpectralSequenceReport",
    "filtered_ss",
    "double_complex_ss",
    "descent_ss",
    "DegenerationReport",
    "check_degeneration",
    "LefschetzError",
    "CPstComplex",
    "c_pst",
    "exp_bk",
    "sharp_projection",
]


@dataclass
class SpectralSequenceReport:
    """pages[r][(p, q)] = dim E_r^{p,q}; differentials[r][(p, q)] = rank of d_r leaving (p, q)."""

    pages: dict
    differentials: dict
    abutment: dict
    converged_at: int
    columns: tuple = field(default=(0, 0))

    def e_infinity(self) -> dict:
        return self.pages[max(self.pages)]

    def grid(self, r: int) -> list[list[int]]:
        """Rows q (top row first is the largest q), columns p."""
        page = self.pages[r]
        ps = sorted({p for p, _ in page})
        qs = sorted({q for _, q in page}, reverse=True)
        return [[page.get((p, q), 0) for p in ps] for q in qs]

    def to_json(self) -> dict:
        def enc(page):
            return [{"p": p, "q": q, "dim": v} for (p, q), v in sorted(page.items())]
        return {
            "pages": {str(r): enc(pg) for r, pg in sorted(self.pages.items())},
            "differentials": {str(r): enc(pg) for r, pg in sorted(self.differentials.items())},
            "abutment": {str(n): v for n, v in sorted(self.abutment.items())},
            "converged_at": self.converged_at,
        }


def filtered_ss(c: ChainComplex, filt: Callable[[int, int], Subspace], p_lo: int, p_hi: int) -> SpectralSequenceReport:
    """Spectral sequence of a complex with a decreasing filtration by subcomplexes.

    ``filt(n, p)`` is F^p C^n; it must be all of C^n for p ≤ p_lo and zero for p > p_hi.
    """
    degs = list(c.degrees)
    whole = {n: Subspace.whole(c.dim(n)) for n in range(degs[0] - 1, degs[-1] + 2)}
    cache: dict = {}

    def f(n, p):
        if n not in c.degrees:
            return Subspace.zero(c.dim(n))
        if p <= p_lo:
            return whole[n]
        if p > p_hi:
            return Subspace.zero(c.dim(n))
        key = ("F", n, p)
        if key not in cache:
            cache[key] = filt(n, p)
        return cache[key]

    def z(n, p, r):
        key = ("Z", n, p, r)
        if key not in cache:
            cache[key] = f(n, p) & f(n + 1, p + r).preimage(c.d(n))
        return cache[key]

    def den(n, p, r):
        key = ("B", n, p, r)
        if key not in cache:
            cache[key] = z(n - 1, p - r + 1, r - 1).image(c.d(n - 1)) + z(n, p + 1, r - 1)
        return cache[key]

    width = p_hi - p_lo + 1
    last = width + 1
    pages, diffs = {}, {}
    for r in range(0, last + 1):
        page, ranks = {}, {}
        for n in degs:
            for p in range(p_lo, p_hi + 1):
                dim = z(n, p, r).dim - den(n, p, r).dim
                if dim:
                    page[(p, n - p)] = dim
                    target = den(n + 1, p + r, r)
                    rank = (z(n, p, r).image(c.d(n)) + target).dim - target.dim
                    if rank:
                        ranks[(p, n - p)] = rank
        pages[r] = page
        diffs[r] = ranks
    abut = {n: c.h(n) for n in degs}
    final = pages[last]
    for n in degs:
        total = sum(v for (p, q), v in final.items() if p + q == n)
        if total != abut[n]:
            raise ComplexError(f"spectral sequence does not converge to H^{n}: {total} ≠ {abut[n]}")
    converged = next(r for r in range(2, last + 1) if all(pages[s] == final for s in range(r, last + 1)))
    return SpectralSequenceReport(pages, diffs, abut, converged, (p_lo, p_hi))


def double_complex_ss(dims: dict, dh: dict, dv: dict) -> SpectralSequenceReport:
    """Column-filtration spectral sequence of a double complex.

    dims[(p, q)] are the term dimensions; dh[(p, q)]: K^{p,q} → K^{p+1,q} and
    dv[(p, q)]: K^{p,q} → K^{p,q+1} must anticommute, so that D = dh + dv.
    Missing maps are zero.
    """
    cells = sorted(k for k, v in dims.items() if v)
    if not cells:
        return SpectralSequenceReport({r: {} for r in range(4)}, {r: {} for r in range(4)}, {0: 0}, 2)
    totals = sorted({p + q for p, q in cells})
    lo, hi = totals[0], totals[-1]
    cols = {n: [(p, q) for p, q in cells if p + q == n] for n in range(lo, hi + 1)}

    def offsets(n):
        out, pos = {}, 0
        for k in cols[n]:
            out[k] = pos
            pos += dims[k]
        return out, pos

    tot_dims = [offsets(n)[1] for n in range(lo, hi + 1)]
    diffs = []
    for n in range(lo, hi):
        (so, ss), (to, ts) = offsets(n), offsets(n + 1)
        grid = [[None] * len(cols[n]) for _ in cols[n + 1]]
        for a, (p, q) in enumerate(cols[n]):
            for b, tgt in enumerate(cols[n + 1]):
                if tgt == (p + 1, q) and (p, q) in dh:
                    grid[b][a] = dh[(p, q)]
                elif tgt == (p, q + 1) and (p, q) in dv:
                    grid[b][a] = dv[(p, q)]
        diffs.append(Mat.block(grid, [dims[k] for k in cols[n + 1]], [dims[k] for k in cols[n]]))
    chain = ChainComplex(lo, tot_dims, diffs)
    ps = [p for p, _ in cells]

    def filt(n, s):
        off, size = offsets(n)
        vs = []
        for (p, q), o in off.items():
            if p >= s:
                for k in range(dims[(p, q)]):
                    v = [0] * size
                    v[o + k] = 1
                    vs.append(v)
        return Subspace(size, vs)

    return filtered_ss(chain, filt, min(ps), max(ps))


def _column(key) -> int:
    """Internal Hom♭ degree of a block of Hom♭(unit, D)."""
    if key[0] == "s":
        return key[1]
    return 0 if key[0] == "dr" else 1


def descent_ss(d, r: int = 0) -> SpectralSequenceReport:
    """E₂^{i,j} = H^i_st(H^j(d)(r)) ⇒ H^{i+j} of Hom♭(unit, d(r)).

    The double complex has rows Hom♭(unit, d^j(r)); filtering by the Hom♭
    degree i and taking d's differential first gives E₁^{i,j} = Hom♭^i(unit, H^j)
    on strict inputs, hence the stated E₂.
    """
    dc = DFComplex.of(d).twisted(r)
    hf = HomFlat(unit_like(dc), dc)
    c = hf.chain

    def filt(n, s):
        lay = hf.layout(n)
        vs = []
        for key, rows, cols in lay.blocks:
            if _column(key) >= s:
                o = lay.offset[key]
                for k in range(rows * cols):
                    v = [0] * lay.size
                    v[o + k] = 1
                    vs.append(v)
        return Subspace(lay.size, vs).preimage(hf.embed[n])

    return filtered_ss(c, filt, 0, 2)


# Degeneration and the Lefschetz decomposition.

class LefschetzError(ValueError):
    pass


@dataclass
class DegenerationReport:
    degenerate: bool
    converged_at: int
    hard_lefschetz: dict
    primitive_dims: dict
    decomposition_ok: bool
    spectral_sequence: SpectralSequenceReport

    def to_json(self) -> dict:
        return {
            "degenerate": self.degenerate,
            "converged_at": self.converged_at,
            "hard_lefschetz": {str(k): v for k, v in sorted(self.hard_lefschetz.items())},
            "primitive_dims": {str(k): v for k, v in sorted(self.primitive_dims.items())},
            "decomposition_ok": self.decomposition_ok,
        }


def lefschetz_problems(d: DFComplex, lef: Sequence[Mat]) -> list[str]:
    """Why L: d → d(1)[2] fails to be a morphism of complexes of filtered modules."""
    out = []
    p = d.p
    degs = list(d.degrees)
    if len(lef) != len(degs):
        return [f"need one Lefschetz matrix per degree ({len(degs)}), got {len(lef)}"]

    def l_at(i):
        return lef[i - d.min_deg] if i in d.degrees else Mat.zeros(d.dim(i + 2), d.dim(i))

    for i in degs:
        li = l_at(i)
        if li.shape != (d.dim(i + 2), d.dim(i)):
            out.append(f"L in degree {i} has shape {li.shape}, expected {(d.dim(i + 2), d.dim(i))}")
    if out:
        return out
    for i in degs:
        if l_at(i + 1) @ d.d(i) != d.d(i + 2) @ l_at(i):
            out.append(f"L does not commute with the differential in degree {i}")
        src, tgt = d.module(i), d.module(i + 2)
        if tgt is None or not src.dim or not tgt.dim:
            continue
        li = l_at(i)
        if li @ src.phi != tgt.phi.scale(Fraction(1, p)) @ li:
            out.append(f"L φ ≠ (φ/p) L in degree {i}")
        if li @ src.n_op != tgt.n_op @ li:
            out.append(f"L N ≠ N L in degree {i}")
        lk = tgt.comparison @ li @ src.comparison.inverse()
        for j in src.dr_side.indices:
            if not src.dr_side.F(j).image(lk) <= tgt.dr_side.F(j + 1):
                out.append(f"L does not send F^{j} into F^{j + 1} in degree {i}")
                break
    return out


def check_degeneration(d: DFComplex, lef: Sequence[Mat], middle: int, r: int = 0) -> DegenerationReport:
    """Hard Lefschetz, primitive decomposition and E₂-degeneration of descent_ss(d, r).

    ``lef[k]`` is L on degree min_deg + k, landing in degree min_deg + k + 2.
    """
    problems = lefschetz_problems(d, lef)
    if problems:
        raise LefschetzError("; ".join(problems))
    ph = theta(d)
    h = {i: cohomology_module(ph, i) for i in d.degrees}
    lh = {i: _induced_on_cohomology(d, lef, i) for i in d.degrees}

    def power(i, k):
        m = Mat.identity(h[i].dim)
        for s in range(k):
            step = lh.get(i + 2 * s)
            if step is None:
                return Mat.zeros(_hdim(h, i + 2 * k), h[i].dim)
            m = step @ m
        return m

    hard = {}
    for k in range(0, middle - d.min_deg + 1):
        lo, hi = middle - k, middle + k
        src, tgt = _hdim(h, lo), _hdim(h, hi)
        hard[k] = src == tgt and (src == 0 or power(lo, k).rank() == src)
    prim = {}
    top = max(d.degrees)
    for i in range(d.min_deg, top + 1):
        if i > middle:
            prim[i] = 0
            continue
        k = middle - i + 1
        prim[i] = h[i].dim - power(i, k).rank() if h[i].dim else 0
    decomposition_ok = True
    for i in range(d.min_deg, top + 1):
        if not h[i].dim:
            continue
        spans = []
        for k in range(0, (i - d.min_deg) // 2 + 1):
            j = i - 2 * k
            if j > middle or k > middle - j or not _hdim(h, j):
                continue
            kmat = power(j, middle - j + 1)
            prim_basis = rref(kmat).kernel
            if prim_basis.dim:
                spans.append(power(j, k) @ prim_basis.basis_matrix())
        got = hstack(*spans) if spans else Mat.zeros(h[i].dim, 0)
        if got.rank() != h[i].dim or got.cols != h[i].dim:
            decomposition_ok = False
    ss = descent_ss(d, r)
    return DegenerationReport(ss.converged_at == 2, ss.converged_at, hard, prim, decomposition_ok, ss)


def _hdim(h: dict, i: int) -> int:
    return h[i].dim if i in h else 0


def _induced_on_cohomology(d: DFComplex, lef: Sequence[Mat], i: int) -> Mat:
    """L on H^i → H^{i+2} in the cohomology bases used by cohomology_module."""
    under = theta(d).m0.underlying()

    def basis(n):
        z = rref(under.d(n)).kernel
        b = Subspace.span_columns(under.d(n - 1))
        im = Subspace(z.dim, (z.coordinates(v) for v in b.basis)) if z.dim else Subspace.zero(0)
        q, s = im.quotient_data()
        return z, q, s

    zi, qi, si = basis(i)
    zj, qj, _ = basis(i + 2)
    if qi.rows == 0 or qj.rows == 0:
        return Mat.zeros(qj.rows, qi.rows)
    li = lef[i - d.min_deg]
    return qj @ solve(zj.basis_matrix(), li @ zi.basis_matrix() @ si)


# Bloch–Kato complex.

@dataclass
class CPstComplex:
    """D_st → D_st ⊕ D_st ⊕ D_K/F⁰ → D_st with maps (N, 1−φ, ι) and (1−pφ) − N."""

    dim_st: int
    dim_quot: int
    first: Mat
    second: Mat
    quotient: Mat

    @property
    def chain(self) -> ChainComplex:
        return ChainComplex(0, [self.dim_st, 2 * self.dim_st + self.dim_quot, self.dim_st], [self.first, self.second])

    def composite_is_zero(self) -> bool:
        return (self.second @ self.first).is_zero()

    def cohomology_dims(self) -> list[int]:
        return self.chain.cohomology_dims()


def _fixed_basis(dim: int, reps) -> Mat:
    if reps is None:
        return Mat.identity(dim)
    total = Mat.zeros(dim, dim)
    for r in reps:
        total = total + r
    s = Subspace.span_columns(total)
    return s.basis_matrix() if s.dim else Mat.zeros(dim, 0)


def c_pst(d: FilteredPhiNModule) -> CPstComplex:
    """C_pst(d) on group invariants; ι is the comparison followed by the quotient by F⁰."""
    p = d.p
    reps0 = d.galois.rep if d.galois is not None else None
    repsk = None if reps0 is None else [d.comparison @ r @ d.comparison.inverse() for r in reps0]
    b0 = _fixed_basis(d.dim, reps0)
    bk = _fixed_basis(d.dim, repsk)
    inv_k = Subspace.span_columns(bk) if bk.cols else Subspace.zero(d.dim)
    f0 = d.dr_side.F(0) & inv_k
    f0_coords = Subspace(bk.cols, (inv_k.coordinates(v) for v in f0.basis)) if bk.cols else Subspace.zero(0)
    q, _ = f0_coords.quotient_data()
    n = b0.cols
    if n:
        phi = solve(b0, d.phi @ b0)
        nop = solve(b0, d.n_op @ b0)
        iota = q @ solve(bk, d.comparison @ b0) if bk.cols else Mat.zeros(q.rows, n)
    else:
        phi = nop = Mat.zeros(0, 0)
        iota = Mat.zeros(q.rows, 0)
    one = Mat.identity(n)
    first = vstack(nop, one - phi, iota)
    second = hstack(one - phi.scale(p), -nop, Mat.zeros(n, q.rows))
    return CPstComplex(n, q.rows, first, second, q)


def _h1_data(c: CPstComplex):
    z = rref(c.second).kernel
    b = Subspace.span_columns(c.first)
    im = Subspace(z.dim, (z.coordinates(v) for v in b.basis)) if z.dim else Subspace.zero(0)
    q, s = im.quotient_data()
    return z, q, s


def exp_bk(d: FilteredPhiNModule) -> Mat:
    """D_K/F⁰ → H¹(C_pst(d)), b̄ ↦ class of (0, 0, b); matrix in the quotient and H¹ bases."""
    c = c_pst(d)
    z, q, _ = _h1_data(c)
    n = c.dim_st
    cols = []
    for k in range(c.dim_quot):
        v = [0] * (2 * n + c.dim_quot)
        v[2 * n + k] = 1
        cols.append(q.apply(z.coordinates(v)) if z.dim else ())
    return Mat.from_columns(cols, q.rows) if cols else Mat.zeros(q.rows, 0)


def sharp_projection(d: FilteredPhiNModule) -> Mat:
    """H¹(C_pst(d)) → H¹(C_st(d)), (u, v, w) ↦ (u, v): the part that forgets D_K/F⁰."""
    c = c_pst(d)
    z, q, s = _h1_data(c)
    n = c.dim_st
    st_first = vstack(c.first.submatrix(range(n), range(n)), c.first.submatrix(range(n, 2 * n), range(n)))
    st_second = c.second.submatrix(range(n), range(2 * n))
    zs = rref(st_second).kernel
    bs = Subspace.span_columns(st_first)
    ims = Subspace(zs.dim, (zs.coordinates(v) for v in bs.basis)) if zs.dim else Subspace.zero(0)
    qs, _ = ims.quotient_data()
    if q.rows == 0 or qs.rows == 0:
        return Mat.zeros(qs.rows, q.rows)
    lifts = z.basis_matrix() @ s
    forget = hstack(Mat.identity(2 * n), Mat.zeros(2 * n, c.dim_quot))
    return qs @ solve(zs.basis_matrix(), forget @ lifts)
