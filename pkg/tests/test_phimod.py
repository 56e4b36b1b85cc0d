import random
from fractions import Fraction

import pytest
from hypothesis import given

from conftest import seeds
from hodgeforge.exactlin import Mat
from hodgeforge.fixtures import random_admissible, random_module
from hodgeforge.phimod import (
    GroupData,
    InvalidModule,
    ModuleComplex,
    PhiModule,
    PhiNModule,
    PrimeMismatch,
    SharpElement,
    check_phin,
    compose_sharp,
    dual,
    hom_sharp,
    hom_sharp_phi,
    hom_sharp_phiN,
    sharp_d,
    tate_twist,
    tensor,
    validate_phin,
)
from oracles import chain_dims, hom_sharp_phi_dims, hom_sharp_phin_dims

P = 5


def _base(seed):
    rng = random.Random(seed)
    return (random_admissible if rng.random() < 0.5 else random_module)(rng).base


def test_unit_sharp_dims():
    u = PhiNModule.unit(P)
    assert hom_sharp_phiN(u, u).cohomology_dims() == [1, 1, 0]
    assert hom_sharp_phi(PhiModule(P, Mat.identity(1)), PhiModule(P, Mat.identity(1))).cohomology_dims() == [1, 1]


@pytest.mark.parametrize("phi,n_op,identity", [
    ([[0]], [[0]], "φ invertible"),
    ([[1, 0], [0, 1]], [[0, 1], [0, 0]], "Nφ ≠ pφN"),
    ([[1]], [[1]], "N nilpotent"),
])
def test_validation_names_the_identity(phi, n_op, identity):
    d = PhiNModule(P, Mat(phi), Mat(n_op))
    assert identity in [v.identity for v in validate_phin(d)]
    with pytest.raises(InvalidModule):
        check_phin(d)


def test_non_prime_rejected():
    assert "p prime" in [v.identity for v in validate_phin(PhiNModule(6, Mat.identity(1)))]


def test_prime_mismatch():
    with pytest.raises(PrimeMismatch):
        hom_sharp_phiN(PhiNModule.unit(5), PhiNModule.unit(7))


def test_group_validation():
    bad = GroupData(2, ((0, 1), (1, 0)), (Mat.identity(1), Mat([[2]])))
    assert bad.problems(1)
    assert not GroupData(2, ((0, 1), (1, 0)), (Mat.identity(1), Mat([[-1]]))).problems(1)


@given(seeds, seeds)
def test_hom_sharp_matches_kron_assembly(s1, s2):
    a, b = _base(s1), _base(s2)
    assert hom_sharp_phiN(a, b).cohomology_dims() == hom_sharp_phin_dims(a, b)
    pa, pb = PhiModule(P, a.phi), PhiModule(P, b.phi)
    assert hom_sharp_phi(pa, pb).cohomology_dims() == hom_sharp_phi_dims(pa, pb)


@given(seeds, seeds)
def test_hom_sharp_dims_use_independent_ranks(s1, s2):
    c = hom_sharp_phiN(_base(s1), _base(s2))
    assert c.cohomology_dims() == chain_dims(c)
    assert c.euler_characteristic() == 0


def test_contractible_source_gives_acyclic_hom():
    u = PhiNModule.unit(P)
    cone = ModuleComplex(0, [u, u], [Mat.identity(1)])
    t = ModuleComplex.single(PhiNModule(P, Mat.diag([1, P]), Mat([[0, 1], [0, 0]])))
    assert all(h == 0 for h in hom_sharp(cone, t).chain.cohomology_dims())
    assert all(h == 0 for h in hom_sharp(t, cone).chain.cohomology_dims())


def test_non_equivariant_differential_rejected():
    u = PhiNModule.unit(P)
    v = PhiNModule(P, Mat([[2]]))
    with pytest.raises(InvalidModule):
        ModuleComplex(0, [u, v], [Mat.identity(1)])


def _random_sharp(rng, deg, d1, d2):
    def rnd():
        return Mat([[rng.randint(-2, 2) for _ in range(d1.dim)] for _ in range(d2.dim)])
    return SharpElement(deg, tuple(rnd() for _ in range({0: 1, 1: 2, 2: 1}[deg])))


def _parts_equal(x, y):
    if x is None or y is None:
        return all(m.is_zero() for m in (x or y).parts) if (x or y) else True
    return x.degree == y.degree and x.parts == y.parts


def _add(x, y, sign=1):
    if x is None:
        return None if y is None else SharpElement(y.degree, tuple(b.scale(sign) for b in y.parts))
    if y is None:
        return x
    return SharpElement(x.degree, tuple(a + b.scale(sign) for a, b in zip(x.parts, y.parts)))


@given(seeds)
def test_sharp_leibniz(seed):
    rng = random.Random(seed)
    a, b, c = (random_admissible(rng, max_dim=2).base for _ in range(3))
    for ng in range(3):
        for nf in range(3 - ng):
            g = _random_sharp(rng, ng, b, c)
            f = _random_sharp(rng, nf, a, b)
            prod = compose_sharp(g, f, P)
            lhs = sharp_d(prod, a, c) if prod is not None else None
            dg, df = sharp_d(g, b, c), sharp_d(f, a, b)
            r1 = compose_sharp(dg, f, P) if dg is not None else None
            r2 = compose_sharp(g, df, P) if df is not None else None
            rhs = _add(r1, r2, -1 if ng % 2 else 1)
            assert _parts_equal(lhs, rhs)


def test_twist_tensor_dual():
    u = PhiNModule.unit(P)
    assert tate_twist(u, 1).phi == Mat([[Fraction(1, P)]])
    assert tate_twist(u, -2).phi == Mat([[P * P]])
    t = PhiNModule(P, Mat.diag([1, P]), Mat([[0, 1], [0, 0]]))
    assert not validate_phin(tensor(t, t))
    assert not validate_phin(dual(t))
    assert dual(dual(t)) == t
    assert tensor(u, t) == t
