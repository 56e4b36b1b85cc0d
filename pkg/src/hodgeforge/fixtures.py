"""Named example modules and complexes, and random admissible modules for testing."""

from __future__ import annotations

import random
from fractions import Fraction

from .dfmod import DFComplex, FilteredPhiNModule, equivariant_filtered_maps, kernel_cokernel
from .exactlin import Mat, Subspace, direct_sum, hstack
from .filtered import FilteredComplex, FilteredSpace
from .formats import Document
from .phimod import GroupData, ModuleComplex, PhiNModule
from .phodge import PadicHodgeComplex

DEFAULT_P = 5


def _one_dim(p: int, phi, jump: int) -> FilteredPhiNModule:
    base = PhiNModule(p, Mat([[phi]]), Mat.zeros(1, 1))
    return FilteredPhiNModule(base, FilteredSpace.trivial(1, at=jump))


def unit(p: int = DEFAULT_P) -> FilteredPhiNModule:
    return FilteredPhiNModule.unit(p)


def qp(r: int, p: int = DEFAULT_P) -> FilteredPhiNModule:
    """Q_p(r): φ = p^{-r}, single jump at −r."""
    return _one_dim(p, Fraction(p) ** -r, -r)


def unramified(mu, p: int = DEFAULT_P) -> FilteredPhiNModule:
    """Unramified character: φ = μ with μ a p-adic unit, jump at 0."""
    return _one_dim(p, Fraction(mu), 0)


def bad_jump(p: int = DEFAULT_P) -> FilteredPhiNModule:
    """φ = 1 with jump at 1: t_N = 0 < t_H = 1."""
    return _one_dim(p, 1, 1)


def tate_curve(l_invariant=0, p: int = DEFAULT_P) -> FilteredPhiNModule:
    """φ = diag(1, p), N e₂ = e₁, F¹ spanned by L·e₁ + e₂."""
    base = PhiNModule(p, Mat.diag([1, p]), Mat([[0, 1], [0, 0]]))
    fil = FilteredSpace.from_bases(2, {0: [(1, 0), (0, 1)], 1: [(Fraction(l_invariant), 1)]})
    return FilteredPhiNModule(base, fil)


def good_ordinary_elliptic(p: int = DEFAULT_P, alpha=2) -> FilteredPhiNModule:
    """φ = diag(α, p/α) with α a unit, F¹ a line that is not an eigenline."""
    alpha = Fraction(alpha)
    base = PhiNModule(p, Mat.diag([alpha, p / alpha]), Mat.zeros(2, 2))
    fil = FilteredSpace.from_bases(2, {0: [(1, 0), (0, 1)], 1: [(1, 1)]})
    return FilteredPhiNModule(base, fil)


def zero_map_complex(mods, degree: int = 0) -> DFComplex:
    """Complex with the given terms and zero differentials."""
    diffs = [Mat.zeros(mods[k + 1].dim, mods[k].dim) for k in range(len(mods) - 1)]
    return DFComplex(degree, mods, diffs)


def elliptic_complex(p: int = DEFAULT_P) -> tuple[DFComplex, list[Mat]]:
    """Cohomology complex of an elliptic curve with multiplicative reduction, and its Lefschetz map.

    Degrees 0, 1, 2 carry unit, the Tate-curve module and Q_p(−1), with a
    contractible unit → unit pair added in degrees 0 and 1.  L sends degree
    i to degree i + 2 of the twist by 1.
    """
    u = unit(p)
    d0 = u.direct_sum(u)
    d1 = u.direct_sum(tate_curve(1, p))
    d2 = qp(-1, p)
    diffs = [Mat([[0, 1], [0, 0], [0, 0]]), Mat.zeros(1, 3)]
    c = DFComplex(0, [d0, d1, d2], diffs)
    lef = [Mat([[1, 0]]), Mat.zeros(0, 3), Mat.zeros(0, 1)]
    return c, lef


def lefschetz_surface_complex(p: int = DEFAULT_P) -> tuple[DFComplex, list[Mat]]:
    """P¹×P¹ model: unit, 0, Q_p(−1)², 0, Q_p(−2) with L = h₁ + h₂."""
    zero = FilteredPhiNModule(PhiNModule(p, Mat.zeros(0, 0), Mat.zeros(0, 0)), FilteredSpace(0, {}))
    h2 = qp(-1, p).direct_sum(qp(-1, p))
    c = zero_map_complex([unit(p), zero, h2, zero, qp(-2, p)])
    lef = [Mat([[1], [1]]), Mat.zeros(0, 0), Mat([[1, 1]]), Mat.zeros(0, 0), Mat.zeros(0, 1)]
    return c, lef


def nonzero_d2_complex(p: int = DEFAULT_P) -> DFComplex:
    """Two-term complex with H⁰ = Q_p(1), H¹ = unit glued by a nonzero Ext² class.

    The class is the product of a φ-extension (a Jordan block in degree 0)
    and an N-extension (in degree 1); no Lefschetz structure is present.
    """
    inv_p = Fraction(1, p)
    e1 = FilteredPhiNModule(PhiNModule(p, Mat([[inv_p, 1], [0, inv_p]]), Mat.zeros(2, 2)),
                            FilteredSpace.trivial(2, at=-1))
    e2 = FilteredPhiNModule(PhiNModule(p, Mat.diag([inv_p, 1]), Mat([[0, 1], [0, 0]])),
                            FilteredSpace.from_bases(2, {-1: [(1, 0), (0, 1)], 0: [(0, 1)]}))
    return DFComplex(0, [e1, e2], [Mat([[0, 1], [0, 0]])])


def sign_character(p: int = DEFAULT_P) -> FilteredPhiNModule:
    """Unit module on which Z/2 acts by −1."""
    g = GroupData(2, ((0, 1), (1, 0)), (Mat.identity(1), Mat([[-1]])))
    return FilteredPhiNModule(PhiNModule.unit(p), FilteredSpace.trivial(1), Mat.identity(1), g)


# Random admissible modules.  Each block is admissible on its own and direct
# sums of admissible modules are admissible.

def _rand_unit(rng: random.Random, p: int) -> Fraction:
    while True:
        num, den = rng.randint(1, 9), rng.randint(1, 4)
        if num % p and den % p:
            return Fraction(rng.choice((1, -1)) * num, den)


def _rand_line_avoiding(rng: random.Random, avoid) -> tuple:
    while True:
        v = (Fraction(rng.randint(-3, 3)), Fraction(rng.randint(-3, 3)))
        if v != (0, 0) and v[0] * avoid[1] != v[1] * avoid[0]:
            return v


def _block_1(rng, p):
    k = rng.randint(-2, 2)
    return _one_dim(p, _rand_unit(rng, p) * Fraction(p) ** k, k)


def _block_tate(rng, p):
    k = rng.randint(-1, 1)
    a = _rand_unit(rng, p)
    base = PhiNModule(p, Mat.diag([a * Fraction(p) ** k, a * Fraction(p) ** (k + 1)]), Mat([[0, 1], [0, 0]]))
    line = _rand_line_avoiding(rng, (1, 0))
    fil = FilteredSpace.from_bases(2, {k: [(1, 0), (0, 1)], k + 1: [line]})
    return FilteredPhiNModule(base, fil)


def _block_crys(rng, p):
    a = rng.randint(-1, 1)
    b = a + rng.randint(0, 2)
    alpha = _rand_unit(rng, p) * Fraction(p) ** a
    beta = _rand_unit(rng, p) * Fraction(p) ** b
    if alpha == beta:
        beta = -beta
    h1 = rng.randint(a - 1, a)
    h2 = a + b - h1
    base = PhiNModule(p, Mat.diag([alpha, beta]), Mat.zeros(2, 2))
    if h1 == h2:
        return FilteredPhiNModule(base, FilteredSpace.trivial(2, at=h1))
    line = _rand_line_avoiding(rng, (1, 0))
    while line[0] == 0:
        line = _rand_line_avoiding(rng, (1, 0))
    return FilteredPhiNModule(base, FilteredSpace.from_bases(2, {h1: [(1, 0), (0, 1)], h2: [line]}))


def random_invertible(rng: random.Random, n: int) -> Mat:
    while True:
        m = Mat([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
        if m.is_invertible():
            return m


def random_admissible(rng: random.Random, p: int = DEFAULT_P, max_dim: int = 3,
                      twist_basis: bool = True) -> FilteredPhiNModule:
    """Direct sum of random admissible blocks, rewritten in a random basis."""
    target = rng.randint(1, max_dim)
    blocks = []
    size = 0
    while size < target:
        room = target - size
        kind = rng.choice(["one", "tate", "crys"] if room >= 2 else ["one"])
        blk = {"one": _block_1, "tate": _block_tate, "crys": _block_crys}[kind](rng, p)
        blocks.append(blk)
        size += blk.dim
    m = blocks[0]
    for blk in blocks[1:]:
        m = m.direct_sum(blk)
    if twist_basis:
        m = m.change_basis(random_invertible(rng, m.dim), random_invertible(rng, m.dim))
    return m


def random_module(rng: random.Random, p: int = DEFAULT_P, max_dim: int = 4) -> FilteredPhiNModule:
    """Random filtered (φ,N)-module, not necessarily admissible."""
    n = rng.randint(1, max_dim)
    # Upper-triangular φ with p-power diagonal keeps N = 0 valid and φ invertible.
    phi = [[0] * n for _ in range(n)]
    for i in range(n):
        phi[i][i] = Fraction(p) ** rng.randint(-2, 2) * _rand_unit(rng, p)
        for j in range(i + 1, n):
            phi[i][j] = rng.randint(-2, 2)
    base = PhiNModule(p, Mat(phi), Mat.zeros(n, n))
    fil = random_filtration(rng, n)
    return FilteredPhiNModule(base, fil).change_basis(random_invertible(rng, n))


def random_filtration(rng: random.Random, n: int) -> FilteredSpace:
    """Random decreasing filtration: each step keeps random combinations of the previous piece."""
    i = rng.randint(-2, 1)
    cur = Subspace.whole(n)
    pieces = {i: cur}
    while cur.dim:
        i += rng.randint(1, 2)
        keep = rng.randint(0, cur.dim - 1)
        basis = cur.basis_matrix()
        combos = [[rng.randint(-2, 2) for _ in range(cur.dim)] for _ in range(keep)]
        cur = Subspace(n, [basis.apply(c) for c in combos])
        if cur.dim:
            pieces[i] = cur
    return FilteredSpace(n, pieces)


def random_morphism(rng: random.Random, src: FilteredPhiNModule, tgt: FilteredPhiNModule) -> Mat:
    """Random integer combination of a basis of the equivariant filtered maps src → tgt."""
    space = equivariant_filtered_maps(src, tgt)
    v = [Fraction(0)] * (src.dim * tgt.dim)
    for b in space.basis:
        c = rng.randint(-2, 2)
        v = [x + c * y for x, y in zip(v, b)]
    return Mat.unvec(v, tgt.dim, src.dim)


def random_complex(rng: random.Random, p: int = DEFAULT_P, length: int = 3, max_dim: int = 3) -> DFComplex:
    """Random bounded complex whose terms share blocks, so the differentials are often nonzero."""
    pool = [random_admissible(rng, p, 2, twist_basis=False) for _ in range(3)]
    terms = []
    for _ in range(rng.randint(1, length)):
        picks = rng.sample(pool, rng.randint(1, 2))
        m = picks[0]
        for b in picks[1:]:
            if m.dim + b.dim <= max_dim:
                m = m.direct_sum(b)
        terms.append(m.change_basis(random_invertible(rng, m.dim), random_invertible(rng, m.dim)))
    diffs = []
    for k in range(len(terms) - 1):
        if not diffs:
            diffs.append(random_morphism(rng, terms[0], terms[1]))
            continue
        kc = kernel_cokernel(diffs[-1], terms[k - 1], terms[k])
        diffs.append(random_morphism(rng, kc.cokernel, terms[k + 1]) @ kc.cokernel_projection)
    return DFComplex(rng.randint(-1, 1), terms, diffs)


def padded_ph(m: FilteredPhiNModule) -> PadicHodgeComplex:
    """θ(m) with an acyclic unit → unit pair added on the Frobenius side only, so a is not invertible."""
    p = m.p
    u = PhiNModule.unit(p)
    d = m.dim
    m0 = ModuleComplex(0, [PhiNModule(p, direct_sum(m.phi, u.phi), direct_sum(m.n_op, u.n_op)), u],
                       [Mat([[0] * d + [1]])])
    mk = FilteredComplex(0, [m.dr_side, FilteredSpace(0, {})], [Mat.zeros(0, d)])
    a = [hstack(m.comparison, Mat.zeros(d, 1)), Mat.zeros(0, 1)]
    return PadicHodgeComplex(m0, mk, a)


# The fixture corpus.  Expected values are derived by hand; the test suite
# recomputes every one of them (tests/test_fixtures.py).

_CHECK = "expected values re-derived by tests/test_fixtures.py::{}"


def corpus(p: int = DEFAULT_P) -> dict[str, Document]:
    out: dict[str, Document] = {}

    def add(name, kind, value, expected, extra=None, note=""):
        comment = (note + "; " if note else "") + _CHECK.format(f"test_fixture[{name}]")
        out[name] = Document(kind, value, {"name": name, "comment": comment, "expected": expected}, extra or {})

    add("unit", "module", unit(p), {"admissible": "Admissible", "h_st": [1, 1, 0]}, note="trivial module K(0)")
    hst_qp = {-2: [0, 0, 0], -1: [0, 0, 0], 0: [1, 1, 0], 1: [0, 2, 1], 2: [0, 1, 0]}
    for r in range(-2, 3):
        name = f"qp{r}" if r >= 0 else f"qp_m{-r}"
        add(name, "module", qp(r, p), {"admissible": "Admissible", "h_st": hst_qp[r]},
            note=f"Q_p({r}): phi = p^{-r}, jump at {-r}")
    add("unramified", "module", unramified(2, p), {"admissible": "Admissible", "h_st": [0, 0, 0]},
        note="unramified character with phi = 2")
    add("tate_curve", "module", tate_curve(3, p), {"admissible": "Admissible", "h_st": [1, 1, 0]},
        note="Tate curve H^1 with L-invariant 3")
    add("good_ordinary_elliptic", "module", good_ordinary_elliptic(p),
        {"admissible": "Admissible", "h_st": [0, 0, 0]}, note="phi = diag(2, p/2), F^1 a non-eigenline")
    add("bad_jump", "module", bad_jump(p), {"admissible": "NotAdmissible: t_N=0 < t_H=1"},
        note="phi = 1 with the jump at 1")
    add("sign_character", "module", sign_character(p), {"admissible": "Admissible", "h_st": [0, 0, 0]},
        note="Z/2 acting by -1 on the unit")
    c, lef = elliptic_complex(p)
    add("elliptic_complex", "complex", c, {"admissible": True, "degenerate": True, "primitive_dims": [1, 2, 0]},
        {"lefschetz": lef, "middle": 1}, note="unit, Tate curve, Q_p(-1) plus a contractible pair")
    c, lef = lefschetz_surface_complex(p)
    add("lefschetz_surface_complex", "complex", c,
        {"admissible": True, "degenerate": True, "primitive_dims": [1, 0, 1, 0, 0]},
        {"lefschetz": lef, "middle": 2}, note="P^1 x P^1 with L = h1 + h2")
    c = nonzero_d2_complex(p)
    add("nonzero_d2", "complex", c, {"admissible": True, "degenerate": False},
        {"lefschetz": [Mat.zeros(0, 2), Mat.zeros(0, 2)], "middle": 0},
        note="H^0 = Q_p(1) and H^1 = unit glued by a nonzero Ext^2 class")
    add("padded_tate", "ph_complex", padded_ph(tate_curve(3, p)), {"admissible": True, "syn_r0": [1, 1, 0, 0]},
        note="theta(Tate curve) plus an acyclic pair on the Frobenius side")
    return out
