import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import seeds
from hodgeforge.exactlin import Mat, Subspace
from hodgeforge.filtered import (
    FilteredComplex,
    FilteredMap,
    FilteredSpace,
    FiltrationError,
    cohomology_object,
    gr_complex,
    hom_dr,
    is_quasi_iso_filtered,
    is_strict,
    truncate,
    truncation_inclusion,
)
from hodgeforge.fixtures import random_complex, random_filtration
from oracles import filtered_hom_basis


def _fil(seed, n=None):
    rng = random.Random(seed)
    return random_filtration(rng, n if n is not None else rng.randint(1, 4))


def test_not_decreasing_rejected():
    with pytest.raises(FiltrationError):
        FilteredSpace(2, {0: Subspace(2, [(1, 0)]), 1: Subspace.whole(2)})


def test_not_exhaustive_rejected():
    with pytest.raises(FiltrationError):
        FilteredSpace(2, {0: Subspace(2, [(1, 0)])})


def test_jumps_and_hodge_number():
    f = FilteredSpace.from_bases(2, {-1: [(1, 0), (0, 1)], 2: [(1, 1)]})
    assert f.gr_dims() == {-1: 1, 2: 1}
    assert f.t_H() == 1
    assert f.F(0) == Subspace(2, [(1, 1)])
    assert f.F(3).dim == 0


@given(seeds, st.integers(-3, 3))
def test_shift(seed, r):
    f = _fil(seed)
    assert f.shift(r).t_H() == f.t_H() - r * f.dim


@given(seeds)
def test_dual(seed):
    f = _fil(seed)
    assert f.dual().t_H() == -f.t_H()
    assert f.dual().dual() == f


@given(seeds, seeds)
def test_sum_and_tensor(s1, s2):
    a, b = _fil(s1, 2), _fil(s2)
    assert a.direct_sum(b).t_H() == a.t_H() + b.t_H()
    assert a.tensor(b).t_H() == b.dim * a.t_H() + a.dim * b.t_H()
    for i in range(-4, 6):
        expected = sum(a.gr_dims().get(j, 0) * b.gr_dims().get(i - j, 0) for j in range(-6, 8))
        assert a.tensor(b).gr_dims().get(i, 0) == expected


@given(seeds, seeds)
def test_hom_dr_matches_brute_force(s1, s2):
    a, b = _fil(s1, 2), _fil(s2, 3)
    assert hom_dr(a, b).dim == filtered_hom_basis(a, b).cols


def test_strictness_witness():
    src = FilteredSpace.trivial(1, at=0)
    tgt = FilteredSpace.trivial(1, at=1)
    f = FilteredMap(src, tgt, Mat.identity(1))
    assert f.is_filtered()
    ok, witness = is_strict(f)
    assert not ok and witness[0] == 1
    assert is_strict(FilteredMap(tgt, tgt, Mat.identity(1)))[0]


def _dr(seed) -> FilteredComplex:
    return random_complex(random.Random(seed)).dr()


@given(seeds)
def test_cohomology_object_dims(seed):
    c = _dr(seed)
    u = c.underlying()
    for n in c.degrees:
        assert cohomology_object(c, n).dim == u.h(n)


@given(seeds)
def test_graded_euler_characteristics_add_up(seed):
    c = _dr(seed)
    lo, hi = min(c.indices()) - 1, max(c.indices()) + 1
    assert sum(gr_complex(c, i).euler_characteristic() for i in range(lo, hi + 1)) == \
        c.underlying().euler_characteristic()


@given(seeds)
def test_truncations(seed):
    c = _dr(seed)
    h = {n: c.underlying().h(n) for n in c.degrees}
    for n in c.degrees:
        le, ge = truncate(c, "le", n), truncate(c, "ge", n)
        assert {k: le.underlying().h(k) for k in le.degrees} == {k: (h[k] if k <= n else 0) for k in le.degrees}
        assert all(ge.underlying().h(k) == (h.get(k, 0) if k >= n else 0) for k in ge.degrees)
    top = max(c.degrees)
    incl = dict(zip(c.degrees, truncation_inclusion(c, top)))
    assert is_quasi_iso_filtered(incl, truncate(c, "le", top), c)


def test_bad_truncation_mode():
    with pytest.raises(ValueError):
        truncate(FilteredComplex.single(FilteredSpace.trivial(1)), "mid", 0)
