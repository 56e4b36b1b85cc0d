"""Every fixture file is current, loads, round-trips and meets its recorded expectations."""

from pathlib import Path

import pytest

from hodgeforge.dfmod import h_st_dims, is_weakly_admissible
from hodgeforge.fixtures import corpus, unit
from hodgeforge.formats import dumps, load
from hodgeforge.phodge import is_admissible_pH, syntomic_cohomology, theta
from hodgeforge.syntomic import c_pst, check_degeneration
from oracles import hom_flat_dims

FIX = Path(__file__).resolve().parent.parent / "fixtures"
CORPUS = corpus()


def test_no_stray_files():
    assert sorted(p.stem for p in FIX.glob("*.json")) == sorted(CORPUS)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_fixture(name):
    path = FIX / f"{name}.json"
    text = path.read_text(encoding="utf-8")
    assert text == dumps(CORPUS[name]), "fixture file is stale; rerun tools/build_fixtures.py"
    doc = load(path)
    assert dumps(doc) == text
    assert doc.meta["name"] == name
    exp = doc.meta["expected"]
    if doc.kind == "module":
        m = doc.value
        verdict = is_weakly_admissible(m)
        if exp["admissible"] == "Admissible":
            assert verdict.status == "Admissible"
        else:
            assert verdict.summary() == exp["admissible"]
        if "h_st" in exp:
            assert h_st_dims(m) == exp["h_st"]
            assert c_pst(m).cohomology_dims() == exp["h_st"]
            if m.galois is None:
                assert hom_flat_dims(unit(m.p), m) == exp["h_st"]
    elif doc.kind == "complex":
        assert is_admissible_pH(theta(doc.value)) == exp["admissible"]
        rep = check_degeneration(doc.value, doc.extra["lefschetz"], doc.extra["middle"])
        assert rep.degenerate == exp["degenerate"]
        if "primitive_dims" in exp:
            assert [rep.primitive_dims[i] for i in sorted(rep.primitive_dims)] == exp["primitive_dims"]
    else:
        assert is_admissible_pH(doc.value) == exp["admissible"]
        assert syntomic_cohomology(doc.value, 0).dims == exp["syn_r0"]
