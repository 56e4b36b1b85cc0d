from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hodgeforge.exactlin import (
    DimensionError,
    Finite,
    InfiniteFamily,
    Mat,
    Subspace,
    image,
    invariant_subspaces,
    kernel,
    left_right,
    min_poly_if_cyclic,
    poly_eval,
    rat,
    solve,
    vp,
)
from oracles import rank as sym_rank
from oracles import sym

entries = st.fractions(min_value=-3, max_value=3, max_denominator=3)


@st.composite
def matrices(draw, rows=None, cols=None):
    r = draw(st.integers(0, 4)) if rows is None else rows
    c = draw(st.integers(0, 4)) if cols is None else cols
    return Mat([[draw(entries) for _ in range(c)] for _ in range(r)], r, c)


@st.composite
def square(draw, n=None):
    k = draw(st.integers(1, 4)) if n is None else n
    return draw(matrices(k, k))


def test_rat_rejects_floats():
    assert rat("3/4") == Fraction(3, 4)
    with pytest.raises(TypeError):
        rat(0.5)


def test_vp():
    assert vp(Fraction(50, 3), 5) == 2
    assert vp(Fraction(1, 25), 5) == -2
    assert vp(7, 5) == 0


def test_ragged_rejected():
    with pytest.raises(DimensionError):
        Mat([[1, 2], [3]])


@given(matrices())
def test_rank_matches_sympy(m):
    assert m.rank() == sym_rank(sym(m))


@given(matrices())
def test_rank_nullity(m):
    k = kernel(m)
    assert k.dim + m.rank() == m.cols
    for v in k.basis:
        assert all(x == 0 for x in m.apply(v))
    assert image(m).dim == m.rank()


@given(square())
def test_inverse_and_det(m):
    assert m.det() == sym(m).det()
    if m.is_invertible():
        assert m @ m.inverse() == Mat.identity(m.rows)
    else:
        assert m.det() == 0


@given(square(3), matrices(3, 2))
def test_solve(a, x):
    b = a @ x
    if a.is_invertible():
        assert solve(a, b) == x
    else:
        assert a @ solve(a, b) == b


@given(matrices(2, 3), matrices(2, 2), matrices(3, 3))
def test_left_right_is_kron(x, a, b):
    assert Mat.unvec(left_right(a, b).apply(x.vec()), 2, 3) == a @ x @ b


@given(matrices(4, 2), matrices(4, 3))
def test_subspace_dimension_formula(a, b):
    u, w = Subspace.span_columns(a), Subspace.span_columns(b)
    assert (u + w).dim + (u & w).dim == u.dim + w.dim
    assert u & w <= u <= u + w


@given(matrices(4, 2))
def test_quotient_and_annihilator(a):
    u = Subspace.span_columns(a)
    q = u.quotient_map()
    assert q.rows == 4 - u.dim
    assert all(all(x == 0 for x in q.apply(v)) for v in u.basis)
    assert u.annihilator().dim == 4 - u.dim


def test_subspace_canonical():
    assert Subspace(2, [(2, 4)]) == Subspace(2, [(-1, -2)])
    assert Subspace(2, [(1, 0), (1, 1)]) == Subspace.whole(2)


@given(square(3))
def test_min_poly_if_cyclic(t):
    coeffs = min_poly_if_cyclic(t)
    if coeffs is not None:
        lhs = t.power(3)
        assert lhs == poly_eval(coeffs, t)


def test_invariant_subspaces_finite():
    lat = invariant_subspaces([Mat.diag([1, 2, 3])], 3)
    assert isinstance(lat, Finite)
    assert len(lat.subspaces) == 8


def test_invariant_subspaces_jordan_chain():
    lat = invariant_subspaces([Mat([[1, 1, 0], [0, 1, 1], [0, 0, 1]])], 3)
    assert isinstance(lat, Finite)
    assert sorted(s.dim for s in lat.subspaces) == [0, 1, 2, 3]


def test_invariant_subspaces_infinite_family():
    lat = invariant_subspaces([Mat.identity(2)], 2)
    assert isinstance(lat, InfiniteFamily)
    for t in (0, 1, Fraction(-3, 2)):
        assert lat.member(t).dim == 1


@given(square(3))
def test_invariant_subspaces_are_invariant(t):
    lat = invariant_subspaces([t], 3)
    if isinstance(lat, Finite):
        assert all(s.is_invariant(t) for s in lat.subspaces)
