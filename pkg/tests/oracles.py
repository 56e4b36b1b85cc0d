"""Brute-force reference computations, independent of the package's linear algebra.

Matrices are converted to sympy and Hom spaces are assembled with Kronecker
products in column-major order, vec(A X B) = (Bᵀ ⊗ A) vec(X).
"""

from __future__ import annotations

import sympy
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from hodgeforge.exactlin import Mat


def sym(m: Mat) -> sympy.Matrix:
    return sympy.Matrix(m.rows, m.cols, lambda i, j: sympy.Rational(m[i, j].numerator, m[i, j].denominator))


def rank(m: sympy.Matrix) -> int:
    if 0 in m.shape:
        return 0
    return DomainMatrix.from_Matrix(m).convert_to(QQ).rank()


def nullspace(m: sympy.Matrix) -> list[sympy.Matrix]:
    if m.rows == 0:
        return [sympy.eye(m.cols)[:, k] for k in range(m.cols)]
    ns = DomainMatrix.from_Matrix(m).convert_to(QQ).nullspace().to_Matrix()
    return [ns[k, :].T for k in range(ns.rows)]


def lr(a: sympy.Matrix, b: sympy.Matrix) -> sympy.Matrix:
    """Matrix of X ↦ a X b on column-major vectors."""
    return sympy.kronecker_product(b.T, a)


def cohomology(dims: list[int], diffs: list[sympy.Matrix]) -> list[int]:
    ranks = [rank(d) for d in diffs]
    return [dims[k] - (ranks[k] if k < len(ranks) else 0) - (ranks[k - 1] if k else 0) for k in range(len(dims))]


def chain_dims(c) -> list[int]:
    """Cohomology of a package ChainComplex recomputed with sympy ranks."""
    return cohomology(list(c.dims), [sym(d) for d in c.differentials])


def _sharp_maps(phi1, n1, phi2, n2, p):
    i1, i2 = sympy.eye(phi1.rows), sympy.eye(phi2.rows)
    d1 = lr(phi2, i1) - lr(i2, phi1)
    d2 = lr(n2, i1) - lr(i2, n1)
    d1p = p * lr(phi2, i1) - lr(i2, phi1)
    d2p = lr(n2, i1) - p * lr(i2, n1)
    return d1, d2, d1p, d2p


def hom_sharp_phi_dims(a, b) -> list[int]:
    d = lr(sym(b.phi), sympy.eye(a.dim)) - lr(sympy.eye(b.dim), sym(a.phi))
    h = a.dim * b.dim
    return cohomology([h, h], [d])


def hom_sharp_phin_dims(a, b) -> list[int]:
    d1, d2, d1p, d2p = _sharp_maps(sym(a.phi), sym(a.n_op), sym(b.phi), sym(b.n_op), a.p)
    h = a.dim * b.dim
    return cohomology([h, 2 * h, h], [d1.col_join(d2), d2p.row_join(-d1p)])


def _piece(fil, i: int, dim: int) -> sympy.Matrix:
    """Columns spanning F^i, read straight from the jump table."""
    above = [j for j in fil.jumps if j >= i]
    if not above:
        return sympy.zeros(dim, 0)
    basis = fil.jumps[min(above)].basis
    if not basis:
        return sympy.zeros(dim, 0)
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in v] for v in basis]).T


def filtered_hom_basis(src, tgt) -> sympy.Matrix:
    """Columns spanning {y : y F^i(src) ⊂ F^i(tgt) for all i}, column-major."""
    m, n = src.dim, tgt.dim
    rows = []
    for i in src.jumps:
        fs = _piece(src, i, m)
        ft = _piece(tgt, i, n)
        ann = sympy.Matrix.hstack(*nullspace(ft.T)).T if ft.cols < n else sympy.zeros(0, n)
        if ann.rows == 0:
            continue
        for k in range(fs.cols):
            rows.append(sympy.kronecker_product(fs[:, k].T, ann))
    if not rows:
        return sympy.eye(m * n)
    cons = sympy.Matrix.vstack(*rows)
    ns = nullspace(cons)
    return sympy.Matrix.hstack(*ns) if ns else sympy.zeros(m * n, 0)


def hom_flat_dims(a, b) -> list[int]:
    """H^0..H^2 of the cone of Hom♯ ⊕ F⁰Hom_K → Hom_K for single modules in degree 0."""
    p = a.p
    d1, d2, d1p, d2p = _sharp_maps(sym(a.phi), sym(a.n_op), sym(b.phi), sym(b.n_op), p)
    h = a.dim * b.dim
    f0 = filtered_hom_basis(a.dr_side, b.dr_side)
    ca, cb = sym(a.comparison), sym(b.comparison)
    to_base = lr(cb.inv(), ca)
    top = (d1.col_join(d2)).row_join(sympy.zeros(2 * h, f0.cols))
    glue = (-sympy.eye(h)).row_join(to_base * f0)
    d0 = top.col_join(glue)
    d1_full = d2p.row_join(-d1p).row_join(sympy.zeros(h, h))
    return cohomology([h + f0.cols, 3 * h, h], [d0, d1_full])


def f0_dim(m) -> int:
    return _piece(m.dr_side, 0, m.dim).cols


def _vp(x: sympy.Rational, p: int) -> int:
    return sympy.multiplicity(p, x.p) - sympy.multiplicity(p, x.q)


def eigen_admissible(m) -> bool | None:
    """Admissibility by enumerating spans of eigenvectors.

    Only applies when N = 0 and φ has distinct rational eigenvalues, so that the
    stable subspaces are exactly those spans; returns None otherwise.
    """
    import itertools

    if not m.n_op.is_zero():
        return None
    phi = sym(m.phi)
    vecs = []
    for val, mult, basis in phi.eigenvects():
        if not val.is_rational or mult != 1:
            return None
        vecs.append((val, basis[0]))
    cb = sym(m.comparison)
    fil = m.dr_side
    jumps = sorted(fil.jumps)
    pieces = {i: cb.inv() * _piece(fil, i, m.dim) for i in jumps}

    def t_h(w):
        total = 0
        for i in jumps:
            nxt = [j for j in jumps if j > i]
            hi = pieces[nxt[0]] if nxt else sympy.zeros(m.dim, 0)
            cap = rank(w) + rank(pieces[i]) - rank(w.row_join(pieces[i]))
            cap_next = rank(w) + rank(hi) - rank(w.row_join(hi))
            total += i * (cap - cap_next)
        return total

    n = len(vecs)
    full = sympy.Matrix.hstack(*[v for _, v in vecs])
    if sum(_vp(val, m.p) for val, _ in vecs) != t_h(full):
        return False
    for k in range(1, n):
        for sub in itertools.combinations(vecs, k):
            w = sympy.Matrix.hstack(*[v for _, v in sub])
            if sum(_vp(val, m.p) for val, _ in sub) < t_h(w):
                return False
    return True
