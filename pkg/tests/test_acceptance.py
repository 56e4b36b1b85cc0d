"""Acceptance suite: eleven timed criteria, one PASS/FAIL line each.

Run under pytest (lines appear in the -v output) or directly with
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from hodgeforge.chains import elem_add, elem_scale, ext_dims  # noqa: E402
from hodgeforge.dfmod import (  # noqa: E402
    hom_flat,
    is_weakly_admissible,
    kernel_cokernel,
    morphism_problems,
    unit_like,
)
from hodgeforge.exactlin import Finite, Mat, invariant_subspaces  # noqa: E402
from hodgeforge.fixtures import (  # noqa: E402
    bad_jump,
    corpus,
    elliptic_complex,
    nonzero_d2_complex,
    padded_ph,
    qp,
    random_admissible,
    random_complex,
    random_module,
    random_morphism,
    tate_curve,
    unit,
)
from hodgeforge.phimod import PhiModule, PhiNModule, hom_sharp, hom_sharp_phi, hom_sharp_phiN  # noqa: E402
from hodgeforge.phodge import (  # noqa: E402
    HomPH,
    compose_pH,
    hom_complex_pH,
    syntomic_cone,
    tate_twist_pH,
    tensor_pH,
    theta,
    unit_pH,
)
from hodgeforge.syntomic import c_pst, check_degeneration, descent_ss, exp_bk, sharp_projection  # noqa: E402
from oracles import chain_dims, f0_dim, hom_flat_dims, hom_sharp_phi_dims, hom_sharp_phin_dims  # noqa: E402

P = 5


def ac1_sharp_engine():
    u = PhiNModule.unit(P)
    c = hom_sharp_phiN(u, u)
    assert ext_dims(c) == [1, 1, 0] == hom_sharp_phin_dims(u, u) == chain_dims(c)
    up = PhiModule(P, u.phi)
    c = hom_sharp_phi(up, up)
    assert c.cohomology_dims() == [1, 1] == hom_sharp_phi_dims(up, up)


def ac2_ext_suite():
    for target, dims in ((unit(), [1, 1, 0]), (qp(1), [0, 2, 1])):
        c = hom_flat(unit(), target)
        assert c.cohomology_dims() == dims == hom_flat_dims(unit(), target) == chain_dims(c)
    rng = random.Random(2)
    for _ in range(100):
        m = random_module(rng, max_dim=4)
        assert hom_flat(unit(), m).euler_characteristic() == f0_dim(m) - m.dim


def ac3_admissibility():
    for r in range(-2, 3):
        assert is_weakly_admissible(qp(r)).status == "Admissible"
    v = is_weakly_admissible(bad_jump())
    assert v.status == "NotAdmissible" and v.witness is not None
    assert (v.sub_t_N, v.sub_t_H) == (0, 1)
    t = tate_curve(3)
    assert isinstance(invariant_subspaces(t.generators(), t.dim), Finite)
    assert is_weakly_admissible(t).status == "Admissible"


def ac4_theta_equivalence():
    rng = random.Random(4)
    for _ in range(50):
        m, t = random_admissible(rng), random_admissible(rng)
        assert hom_complex_pH(theta(m), theta(t)).cohomology_dims() == hom_flat(m, t).cohomology_dims()


def _both_routes(m, r):
    cone = syntomic_cone(m, r)
    group = m.m0.groups[0] if m.m0.groups is not None else None
    direct = hom_complex_pH(unit_pH(P, group), tate_twist_pH(m, r))
    lo, hi = min(cone.min_deg, direct.min_deg), max(cone.max_deg, direct.max_deg)
    a = [cone.h(n) if n in cone.degrees else 0 for n in range(lo, hi + 1)]
    b = [direct.h(n) if n in direct.degrees else 0 for n in range(lo, hi + 1)]
    assert a == b, (a, b)


def ac5_syntomic_routes():
    for doc in corpus().values():
        if doc.kind == "module" and not is_weakly_admissible(doc.value).admissible:
            continue
        m = doc.value if doc.kind == "ph_complex" else theta(doc.value)
        for r in (-1, 0, 1, 2):
            _both_routes(m, r)
    rng = random.Random(5)
    for k in range(100):
        kind = k % 3
        if kind == 0:
            m = theta(random_admissible(rng))
        elif kind == 1:
            m = padded_ph(random_admissible(rng, max_dim=2))
        else:
            m = theta(random_complex(rng, length=2, max_dim=2))
        _both_routes(m, rng.randint(-1, 2))


def ac6_kunneth():
    rng = random.Random(6)
    for _ in range(30):
        x = theta(random_complex(rng, length=2, max_dim=2))
        y = theta(random_complex(rng, length=2, max_dim=2))
        t = tensor_pH(x, y)
        hx = {n: x.m0.underlying().h(n) for n in x.degrees}
        hy = {n: y.m0.underlying().h(n) for n in y.degrees}
        for n in t.degrees:
            assert t.m0.underlying().h(n) == sum(hx[i] * hy.get(n - i, 0) for i in hx)


def ac7_spectral_sequence():
    rng = random.Random(7)
    for _ in range(100):
        d = random_complex(rng, length=3, max_dim=3)
        ss = descent_ss(d)
        c = hom_flat(unit_like(d), d)
        abut = dict(zip(range(c.min_deg, c.max_deg + 1), chain_dims(c)))
        sums: dict = {}
        for (p, q), v in ss.e_infinity().items():
            sums[p + q] = sums.get(p + q, 0) + v
        assert all(sums.get(n, 0) == v for n, v in abut.items())
        assert all(n in abut for n in sums)
    for _ in range(20):
        assert descent_ss(random_admissible(rng)).converged_at == 2


def ac8_degeneration():
    c, lef = elliptic_complex()
    rep = check_degeneration(c, lef, 1)
    assert rep.degenerate and rep.decomposition_ok
    rep = check_degeneration(nonzero_d2_complex(), [Mat.zeros(0, 2), Mat.zeros(0, 2)], 0)
    assert not rep.degenerate


def ac9_bloch_kato():
    for doc in corpus().values():
        if doc.kind == "module":
            m = doc.value
            assert c_pst(m).cohomology_dims() == hom_flat(unit_like(m), m).cohomology_dims()
    e = exp_bk(qp(1))
    assert e.cols == 1 and e.rank() == 1 and e.rows == c_pst(qp(1)).cohomology_dims()[1] == 2
    rng = random.Random(9)
    for _ in range(100):
        m = random_module(rng)
        assert c_pst(m).composite_is_zero()
        assert (sharp_projection(m) @ exp_bk(m)).is_zero()


def ac10_strictness():
    rng = random.Random(10)
    nonzero = 0
    for _ in range(100):
        a = random_admissible(rng, max_dim=2)
        b = random_admissible(rng, max_dim=3 - a.dim) if a.dim < 3 else None
        c = random_admissible(rng, max_dim=3 - a.dim) if a.dim < 3 else None
        src = a.direct_sum(b) if b is not None and a.dim + b.dim <= 3 else a
        tgt = a.direct_sum(c) if c is not None and a.dim + c.dim <= 3 else a
        f = random_morphism(rng, src, tgt)
        assert not morphism_problems(f, src, tgt)
        nonzero += not f.is_zero()
        assert kernel_cokernel(f, src, tgt).strict
    assert nonzero >= 50


def _dd_zero(c):
    return all((c.differentials[k + 1] @ c.differentials[k]).is_zero() for k in range(len(c.differentials) - 1))


def ac11_structural():
    rng = random.Random(11)
    for _ in range(15):
        a, b = random_complex(rng, length=2, max_dim=2), random_complex(rng, length=2, max_dim=2)
        ta, tb = theta(a), theta(b)
        for c in (a.sharp().underlying(), a.dr().underlying(), hom_sharp(a.sharp(), b.sharp()).chain,
                  hom_flat(a, b), hom_complex_pH(ta, tb), syntomic_cone(ta, rng.randint(-1, 2)),
                  c_pst(random_module(rng)).chain):
            assert _dd_zero(c)
    for _ in range(10):
        x, y, z = (theta(random_admissible(rng, max_dim=2)) for _ in range(3))
        hxy, hyz, hxz = HomPH(x, y), HomPH(y, z), HomPH(x, z)
        for nf in range(hxy.lo, hxy.hi + 1):
            for ng in range(hyz.lo, hyz.hi + 1):
                if not hxz.lo <= nf + ng < hxz.hi:
                    continue
                f = hxy.layout(nf).unpack([rng.randint(-2, 2) for _ in range(hxy.layout(nf).size)])
                g = hyz.layout(ng).unpack([rng.randint(-2, 2) for _ in range(hyz.layout(ng).size)])
                lhs = hxz.differential(nf + ng, compose_pH(g, ng, f, nf, P))
                r1 = compose_pH(hyz.differential(ng, g), ng + 1, f, nf, P) if ng < hyz.hi else {}
                r2 = compose_pH(g, ng, hxy.differential(nf, f), nf + 1, P) if nf < hxy.hi else {}
                rhs = elem_add(r1, elem_scale(r2, -1 if ng % 2 else 1))
                lay = hxz.layout(nf + ng + 1)
                assert lay.pack({k: v for k, v in lhs.items() if k in lay}) == \
                    lay.pack({k: v for k, v in rhs.items() if k in lay})


CRITERIA = [
    ("AC1", "Hom♯ engine on the unit", 1, ac1_sharp_engine),
    ("AC2", "DF Ext suite and Euler characteristic", 10, ac2_ext_suite),
    ("AC3", "admissibility verdicts", 5, ac3_admissibility),
    ("AC4", "θ preserves Ext on 50 admissible pairs", 30, ac4_theta_equivalence),
    ("AC5", "syntomic cone agrees with Hom(K(0), m(r))", 30, ac5_syntomic_routes),
    ("AC6", "Künneth for tensor products", 10, ac6_kunneth),
    ("AC7", "spectral sequence abuts to H^n", 60, ac7_spectral_sequence),
    ("AC8", "Lefschetz degeneration and its failure", 5, ac8_degeneration),
    ("AC9", "Bloch-Kato complex and exponential", 10, ac9_bloch_kato),
    ("AC10", "equivariant morphisms are strict", 30, ac10_strictness),
    ("AC11", "d∘d = 0 and the Leibniz rule", 10, ac11_structural),
]


def run_criterion(label, title, limit, fn) -> tuple[bool, str]:
    start = time.perf_counter()
    error = None
    try:
        fn()
    except Exception as e:  # report every failure mode on the line
        error = f"{type(e).__name__}: {e}"
    elapsed = time.perf_counter() - start
    ok = error is None and elapsed < limit
    status = "PASS" if ok else "FAIL"
    line = f"[{status}] {label} {title}: {elapsed:.2f}s (limit {limit}s)"
    if error is not None:
        line += f" {error}"
    elif not ok:
        line += " over time limit"
    return ok, line


@pytest.mark.parametrize("label,title,limit,fn", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_acceptance(label, title, limit, fn, capsys):
    ok, line = run_criterion(label, title, limit, fn)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [run_criterion(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
