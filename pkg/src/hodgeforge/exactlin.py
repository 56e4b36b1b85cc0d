"""Exact linear algebra over the rationals.

Vectors are tuples of ``Fraction``; matrices act on column vectors from the
left.  A ``Subspace`` keeps its basis as the rows of a reduced echelon form,
so two subspaces are equal exactly when their stored bases are equal.

>>> m = Mat([[1, 2], [2, 4]])
>>> r = rref(m)
>>> r.rank, r.kernel.basis
(1, ((Fraction(1, 1), Fraction(1, 2)),))
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

Rat = Fraction
Vec = tuple


class DimensionError(ValueError):
    pass


def rat(x) -> Fraction:
    """Coerce an int, Fraction or "a/b" string into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot read {x!r} as an exact rational")


def vp(x, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    x = rat(x)
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


class Mat:
    """Immutable dense matrix of Fractions."""

    __slots__ = ("rows", "cols", "_e")

    def __init__(self, entries, rows: int | None = None, cols: int | None = None):
        e = tuple(tuple(rat(x) for x in row) for row in entries)
        if rows is None:
            rows = len(e)
        if cols is None:
            cols = len(e[0]) if e else 0
        if len(e) != rows or any(len(r) != cols for r in e):
            raise DimensionError("ragged matrix entries")
        self.rows = rows
        self.cols = cols
        self._e = e

    @classmethod
    def _raw(cls, e, rows, cols) -> Mat:
        m = object.__new__(cls)
        m.rows, m.cols, m._e = rows, cols, e
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Mat:
        z = Fraction(0)
        return cls._raw(tuple((z,) * cols for _ in range(rows)), rows, cols)

    @classmethod
    def identity(cls, n: int) -> Mat:
        return cls.scalar(n, 1)

    @classmethod
    def scalar(cls, n: int, c) -> Mat:
        return cls.diag([c] * n)

    @classmethod
    def diag(cls, values) -> Mat:
        vals = [rat(v) for v in values]
        n = len(vals)
        z = Fraction(0)
        return cls._raw(tuple(tuple(vals[i] if i == j else z for j in range(n)) for i in range(n)), n, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> Mat:
        cols = [tuple(rat(x) for x in c) for c in columns]
        if any(len(c) != rows for c in cols):
            raise DimensionError("column length mismatch")
        return cls._raw(tuple(tuple(c[i] for c in cols) for i in range(rows)), rows, len(cols))

    @classmethod
    def unit(cls, rows: int, cols: int, i: int, j: int) -> Mat:
        e = [[0] * cols for _ in range(rows)]
        e[i][j] = 1
        return cls(e, rows, cols)

    @classmethod
    def block(cls, grid: Sequence[Sequence[Mat | None]], row_sizes: Sequence[int], col_sizes: Sequence[int]) -> Mat:
        """Assemble a block matrix; ``None`` blocks are zero."""
        out = []
        z = Fraction(0)
        for bi, rs in enumerate(row_sizes):
            for r in range(rs):
                line = []
                for bj, cs in enumerate(col_sizes):
                    b = grid[bi][bj]
                    if b is None:
                        line.extend((z,) * cs)
                    else:
                        if b.rows != rs or b.cols != cs:
                            raise DimensionError(f"block ({bi},{bj}) has shape {b.shape}, expected {(rs, cs)}")
                        line.extend(b._e[r])
                out.append(tuple(line))
        return cls._raw(tuple(out), sum(row_sizes), sum(col_sizes))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self._e[i][j]

    def row(self, i: int) -> tuple:
        return self._e[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self._e)

    def columns(self) -> list[tuple]:
        return [self.col(j) for j in range(self.cols)]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._e]

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self._e)
        return f"Mat({self.rows}x{self.cols}: [{body}])"

    def __eq__(self, other) -> bool:
        return isinstance(other, Mat) and self.shape == other.shape and self._e == other._e

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._e))

    def _check_same(self, other: Mat) -> None:
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: Mat) -> Mat:
        self._check_same(other)
        return Mat._raw(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._e, other._e)), self.rows, self.cols)

    def __sub__(self, other: Mat) -> Mat:
        self._check_same(other)
        return Mat._raw(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._e, other._e)), self.rows, self.cols)

    def __neg__(self) -> Mat:
        return Mat._raw(tuple(tuple(-a for a in r) for r in self._e), self.rows, self.cols)

    def scale(self, c) -> Mat:
        c = rat(c)
        return Mat._raw(tuple(tuple(c * a for a in r) for r in self._e), self.rows, self.cols)

    def __rmul__(self, c) -> Mat:
        return self.scale(c)

    def __matmul__(self, other: Mat) -> Mat:
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = other.cols
        oe = other._e
        z = Fraction(0)
        out = []
        for r in self._e:
            acc = [z] * ocols
            for k, a in enumerate(r):
                if a:
                    ok = oe[k]
                    for j in range(ocols):
                        b = ok[j]
                        if b:
                            acc[j] += a * b
            out.append(tuple(acc))
        return Mat._raw(tuple(out), self.rows, ocols)

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise DimensionError("vector length mismatch")
        return tuple(sum((a * b for a, b in zip(r, v) if a and b), Fraction(0)) for r in self._e)

    @property
    def T(self) -> Mat:
        if not self.rows:
            return Mat.zeros(self.cols, 0)
        return Mat._raw(tuple(zip(*self._e)), self.cols, self.rows)

    def kron(self, other: Mat) -> Mat:
        out = []
        for r in self._e:
            for s in other._e:
                out.append(tuple(a * b for a in r for b in s))
        return Mat._raw(tuple(out), self.rows * other.rows, self.cols * other.cols)

    def is_zero(self) -> bool:
        return all(not x for r in self._e for x in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def power(self, k: int) -> Mat:
        if not self.is_square():
            raise DimensionError("power of a non-square matrix")
        if k < 0:
            return self.inverse().power(-k)
        result = Mat.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def rank(self) -> int:
        return len(_echelon(self._e, self.cols)[1])

    def det(self) -> Fraction:
        if not self.is_square():
            raise DimensionError("determinant of a non-square matrix")
        a = [list(r) for r in self._e]
        n = self.rows
        d = Fraction(1)
        for c in range(n):
            piv = next((r for r in range(c, n) if a[r][c]), None)
            if piv is None:
                return Fraction(0)
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                d = -d
            d *= a[c][c]
            inv = 1 / a[c][c]
            for r in range(c + 1, n):
                f = a[r][c] * inv
                if f:
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return d

    def is_invertible(self) -> bool:
        return self.is_square() and self.rank() == self.rows

    def inverse(self) -> Mat:
        if not self.is_square():
            raise DimensionError("inverse of a non-square matrix")
        n = self.rows
        aug = [r + tuple(Fraction(int(i == j)) for j in range(n)) for i, r in enumerate(self._e)]
        red, piv = _echelon(aug, 2 * n)
        if piv[:n] != list(range(n)) or len(piv) < n:
            raise ZeroDivisionError("matrix is singular")
        return Mat._raw(tuple(tuple(red[i][n:]) for i in range(n)), n, n)

    def vec(self) -> tuple:
        """Row-major flattening."""
        return tuple(x for r in self._e for x in r)

    @classmethod
    def unvec(cls, v: Sequence, rows: int, cols: int) -> Mat:
        if len(v) != rows * cols:
            raise DimensionError("vector length does not match shape")
        v = tuple(rat(x) for x in v)
        return cls._raw(tuple(v[i * cols:(i + 1) * cols] for i in range(rows)), rows, cols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Mat:
        return Mat._raw(tuple(tuple(self._e[i][j] for j in cols) for i in rows), len(rows), len(cols))


def hstack(*ms: Mat) -> Mat:
    rows = ms[0].rows
    if any(m.rows != rows for m in ms):
        raise DimensionError("hstack row mismatch")
    return Mat._raw(tuple(tuple(x for m in ms for x in m.row(i)) for i in range(rows)), rows, sum(m.cols for m in ms))


def vstack(*ms: Mat) -> Mat:
    cols = ms[0].cols
    if any(m.cols != cols for m in ms):
        raise DimensionError("vstack column mismatch")
    return Mat._raw(tuple(r for m in ms for r in m._e), sum(m.rows for m in ms), cols)


def direct_sum(*ms: Mat) -> Mat:
    return Mat.block([[m if i == j else None for j, _ in enumerate(ms)] for i, m in enumerate(ms)],
                     [m.rows for m in ms], [m.cols for m in ms])


def left_right(a: Mat, b: Mat) -> Mat:
    """Matrix of x -> a x b on row-major flattened matrices x."""
    return a.kron(b.T)


def _echelon(rows: Iterable[Sequence[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns nonzero rows and pivot columns."""
    a = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    nrows = len(a)
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        pr = [x * inv for x in a[r]]
        a[r] = pr
        nz = [j for j in range(c, ncols) if pr[j]]
        for i in range(nrows):
            if i != r:
                f = a[i][c]
                if f:
                    ai = a[i]
                    for j in nz:
                        ai[j] -= f * pr[j]
        pivots.append(c)
        r += 1
    return a[:r], pivots


class Subspace:
    """Subspace of Q^n stored as the rows of its reduced echelon basis."""

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        vs = [tuple(rat(x) for x in v) for v in vectors]
        if any(len(v) != ambient_dim for v in vs):
            raise DimensionError("vector length differs from ambient dimension")
        red, piv = _echelon(vs, ambient_dim)
        self.ambient_dim = ambient_dim
        self.basis = tuple(tuple(r) for r in red)
        self.pivots = tuple(piv)

    @classmethod
    def zero(cls, n: int) -> Subspace:
        return cls(n)

    @classmethod
    def whole(cls, n: int) -> Subspace:
        return cls(n, Mat.identity(n).columns())

    @classmethod
    def span_columns(cls, m: Mat) -> Subspace:
        return cls(m.rows, m.columns())

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __repr__(self) -> str:
        return f"Subspace(dim {self.dim} in {self.ambient_dim}: {[list(map(str, b)) for b in self.basis]})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    def _check(self, other: Subspace) -> None:
        if self.ambient_dim != other.ambient_dim:
            raise DimensionError(f"ambient mismatch {self.ambient_dim} vs {other.ambient_dim}")

    def basis_matrix(self) -> Mat:
        """Columns are the basis vectors."""
        return Mat.from_columns(self.basis, self.ambient_dim)

    def contains(self, v: Sequence) -> bool:
        v = [rat(x) for x in v]
        for b, c in zip(self.basis, self.pivots):
            f = v[c]
            if f:
                v = [x - f * y for x, y in zip(v, b)]
        return not any(v)

    def coordinates(self, v: Sequence) -> tuple:
        """Coefficients of v in the stored basis; raises if v is outside."""
        v = [rat(x) for x in v]
        coords = tuple(v[c] for c in self.pivots)
        for b, f in zip(self.basis, coords):
            if f:
                v = [x - f * y for x, y in zip(v, b)]
        if any(v):
            raise ValueError("vector not in subspace")
        return coords

    def __le__(self, other: Subspace) -> bool:
        self._check(other)
        return all(other.contains(b) for b in self.basis)

    def __add__(self, other: Subspace) -> Subspace:
        self._check(other)
        return Subspace(self.ambient_dim, self.basis + other.basis)

    def annihilator(self) -> Subspace:
        if not self.basis:
            return Subspace.whole(self.ambient_dim)
        return rref(Mat(self.basis, self.dim, self.ambient_dim)).kernel

    def __and__(self, other: Subspace) -> Subspace:
        self._check(other)
        return (self.annihilator() + other.annihilator()).annihilator()

    def quotient_map(self) -> Mat:
        """Surjection Q^n -> Q^(n-k) with kernel exactly this subspace."""
        return self.quotient_data()[0]

    def quotient_data(self) -> tuple[Mat, Mat]:
        """(quotient map, section) using the non-pivot coordinates as complement."""
        n = self.ambient_dim
        free = [j for j in range(n) if j not in set(self.pivots)]
        q = []
        for j in free:
            row = [Fraction(0)] * n
            row[j] = Fraction(1)
            for b, c in zip(self.basis, self.pivots):
                if b[j]:
                    row[c] -= b[j]
            q.append(row)
        qm = Mat(q, len(free), n)
        s = Mat.from_columns([[Fraction(int(i == j)) for i in range(n)] for j in free], n) if free else Mat.zeros(n, 0)
        return qm, s

    def image(self, m: Mat) -> Subspace:
        if m.cols != self.ambient_dim:
            raise DimensionError("map source does not match ambient dimension")
        return Subspace(m.rows, (m.apply(b) for b in self.basis))

    def preimage(self, m: Mat) -> Subspace:
        """{v : m v in self}."""
        if m.rows != self.ambient_dim:
            raise DimensionError("map target does not match ambient dimension")
        q = self.quotient_map()
        return rref(q @ m).kernel

    def is_invariant(self, g: Mat) -> bool:
        return all(self.contains(g.apply(b)) for b in self.basis)

    def restrict(self, g: Mat) -> Mat:
        """Matrix of g on this (g-stable) subspace in the stored basis."""
        cols = [self.coordinates(g.apply(b)) for b in self.basis]
        return Mat.from_columns(cols, self.dim) if cols else Mat.zeros(0, 0)

    def induced_on_quotient(self, g: Mat) -> Mat:
        q, s = self.quotient_data()
        return q @ g @ s


def subspace_algebra(a: Subspace, b: Subspace, op: str):
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError("ambient mismatch")
    if op == "sum":
        return a + b
    if op == "intersect":
        return a & b
    if op == "quotient_map":
        return a.quotient_map()
    raise ValueError(f"unknown subspace operation {op!r}")


@dataclass(frozen=True)
class RrefResult:
    rank: int
    kernel: Subspace
    image: Subspace
    pivot_cols: list
    reduced: Mat


def rref(m: Mat) -> RrefResult:
    red, piv = _echelon(m._e, m.cols)
    free = [j for j in range(m.cols) if j not in set(piv)]
    kern = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for row, c in zip(red, piv):
            v[c] = -row[f]
        kern.append(v)
    image = Subspace(m.rows, (m.col(j) for j in piv))
    redm = Mat(red, len(red), m.cols) if red else Mat.zeros(0, m.cols)
    return RrefResult(len(piv), Subspace(m.cols, kern), image, list(piv), redm)


def kernel(m: Mat) -> Subspace:
    return rref(m).kernel


def image(m: Mat) -> Subspace:
    return Subspace(m.rows, m.columns())


def solve(a: Mat, b: Mat) -> Mat:
    """Some X with a X = b; raises ValueError when none exists."""
    aug = [ra + rb for ra, rb in zip(a._e, b._e)]
    red, piv = _echelon(aug, a.cols + b.cols)
    if piv and piv[-1] >= a.cols:
        raise ValueError("inconsistent linear system")
    x = [[Fraction(0)] * b.cols for _ in range(a.cols)]
    for row, c in zip(red, piv):
        x[c] = list(row[a.cols:])
    return Mat(x, a.cols, b.cols)


class Echelon:
    """Incrementally grown span, used for closures under a set of operators."""

    def __init__(self, n: int):
        self.n = n
        self.rows: list[list[Fraction]] = []
        self.pivots: list[int] = []

    def reduce(self, v: Sequence) -> list[Fraction]:
        v = [rat(x) for x in v]
        for r, c in zip(self.rows, self.pivots):
            f = v[c]
            if f:
                v = [x - f * y for x, y in zip(v, r)]
        return v

    def add(self, v: Sequence) -> bool:
        w = self.reduce(v)
        c = next((j for j, x in enumerate(w) if x), None)
        if c is None:
            return False
        inv = 1 / w[c]
        w = [x * inv for x in w]
        for i, r in enumerate(self.rows):
            if r[c]:
                f = r[c]
                self.rows[i] = [x - f * y for x, y in zip(r, w)]
        self.rows.append(w)
        self.pivots.append(c)
        return True

    def subspace(self) -> Subspace:
        return Subspace(self.n, self.rows)


def closure(vectors: Iterable[Sequence], operators: Sequence[Mat], n: int) -> Subspace:
    """Smallest subspace containing the vectors and stable under the operators."""
    e = Echelon(n)
    queue = [tuple(rat(x) for x in v) for v in vectors]
    while queue:
        v = queue.pop()
        if e.add(v):
            queue.extend(g.apply(v) for g in operators)
    return e.subspace()


def algebra_basis(generators: Sequence[Mat], n: int) -> list[Mat]:
    """Basis of the unital algebra generated by the given square matrices."""
    e = Echelon(n * n)
    basis: list[Mat] = []
    queue = [Mat.identity(n)]
    while queue:
        a = queue.pop()
        if e.add(a.vec()):
            basis.append(a)
            queue.extend(g @ a for g in generators)
    return basis


def min_poly_if_cyclic(t: Mat) -> list[Fraction] | None:
    """Coefficients c_0..c_{n-1} with t^n = sum c_i t^i when t is cyclic, else None."""
    n = t.rows
    powers = [Mat.identity(n)]
    for _ in range(n):
        powers.append(powers[-1] @ t)
    basis = Mat.from_columns([p.vec() for p in powers[:n]], n * n)
    try:
        coeffs = solve(basis, Mat.from_columns([powers[n].vec()], n * n))
    except ValueError:
        return None
    if basis.rank() < n:
        return None
    return list(coeffs.col(0))


def poly_eval(coeffs: Sequence[Fraction], t: Mat) -> Mat:
    """Evaluate sum coeffs[i] t^i (ascending coefficients) by Horner's rule."""
    n = t.rows
    acc = Mat.zeros(n, n)
    for c in reversed(coeffs):
        acc = acc @ t + Mat.scalar(n, c)
    return acc


@dataclass(frozen=True)
class Finite:
    subspaces: list


@dataclass(frozen=True)
class InfiniteFamily:
    """Invariant subspaces floor + (any line in component/floor).

    ``component`` is None when no rational family could be exhibited but the
    lattice could not be certified finite either.
    """

    floor: Subspace
    component: Subspace | None

    def member(self, t) -> Subspace:
        q, s = self.floor.quotient_data()
        cols = [q.apply(b) for b in self.component.basis]
        coords = Subspace(q.rows, cols).basis
        w = tuple(a + rat(t) * b for a, b in zip(coords[0], coords[1]))
        return self.floor + Subspace(self.floor.ambient_dim, [s.apply(w)])


def _factor_ascending(coeffs: Sequence[Fraction]) -> list[tuple[list[Fraction], int]]:
    import sympy

    x = sympy.Symbol("x")
    n = len(coeffs)
    expr = x ** n - sum(sympy.Rational(c.numerator, c.denominator) * x ** i for i, c in enumerate(coeffs))
    _, factors = sympy.factor_list(sympy.Poly(expr, x, domain="QQ"))
    out = []
    for f, e in factors:
        asc = [Fraction(int(c.p), int(c.q)) for c in reversed(f.all_coeffs())]
        out.append((asc, e))
    return out


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _rational_roots(m: Mat) -> list[Fraction]:
    import sympy

    if m.rows == 0:
        return []
    sm = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in m.tolist()])
    poly = sm.charpoly()
    return sorted({Fraction(int(r.p), int(r.q)) for r in sympy.roots(poly, filter="Q") if r.is_rational})


def _joint_eigenspaces(gens: Sequence[Mat], n: int) -> list[Subspace]:
    # Generators need not commute, so intersect with full eigenspaces rather than restrict.
    spaces = [Subspace.whole(n)]
    for g in gens:
        eigen = [kernel(g - Mat.scalar(n, lam)) for lam in _rational_roots(g)]
        spaces = [s & e for s in spaces for e in eigen if (s & e).dim]
    return [s for s in spaces if s.dim]


def _find_cyclic(algebra: Sequence[Mat], n: int, tries: int = 12) -> Mat | None:
    rng = random.Random(0x5EED)
    candidates = list(algebra[1:]) if len(algebra) > 1 else []
    for g in candidates:
        if min_poly_if_cyclic(g) is not None:
            return g
    for _ in range(tries):
        t = Mat.zeros(n, n)
        for a in algebra:
            t = t + a.scale(rng.randint(-40, 40))
        if min_poly_if_cyclic(t) is not None:
            return t
    return None


def invariant_subspaces(generators: Sequence[Mat], ambient_dim: int) -> Finite | InfiniteFamily:
    n = ambient_dim
    for g in generators:
        if g.shape != (n, n):
            raise DimensionError("generator is not a square matrix of the ambient size")
    if n == 0:
        return Finite([Subspace.zero(0)])
    algebra = algebra_basis(generators, n)
    t = _find_cyclic(algebra, n)
    if t is not None:
        coeffs = min_poly_if_cyclic(t)
        factors = _factor_ascending(coeffs)
        found = set()
        for exps in product(*(range(e + 1) for _, e in factors)):
            poly = [Fraction(1)]
            for (f, _), k in zip(factors, exps):
                for _ in range(k):
                    poly = _poly_mul(poly, f)
            s = kernel(poly_eval(poly, t))
            if all(s.is_invariant(g) for g in generators):
                found.add(s)
        return Finite(sorted(found, key=lambda s: (s.dim, s.basis)))
    return _infinite_witness(generators, n)


def _infinite_witness(generators: Sequence[Mat], n: int) -> InfiniteFamily:
    """Search sub-quotients for a joint eigenspace of dimension at least two."""
    seen = {Subspace.zero(n)}
    queue = [Subspace.zero(n)]
    while queue and len(seen) < 512:
        floor = queue.pop(0)
        q, s = floor.quotient_data()
        induced = [q @ g @ s for g in generators]
        for e in _joint_eigenspaces(induced, q.rows):
            lifted = floor + Subspace(n, (s.apply(v) for v in e.basis))
            if e.dim >= 2:
                return InfiniteFamily(floor, lifted)
            if lifted not in seen:
                seen.add(lifted)
                queue.append(lifted)
    return InfiniteFamily(Subspace.zero(n), None)
