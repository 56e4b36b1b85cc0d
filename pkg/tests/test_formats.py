import json
import random

import pytest
from hypothesis import given

from conftest import seeds
from hodgeforge.fixtures import padded_ph, random_admissible, random_complex, random_module
from hodgeforge.formats import Document, FormatError, InvalidDocument, dumps, loads


def _module_json(**overrides):
    doc = {"p": 5, "dim": 1, "phi": [["1"]], "filtration": [{"jump": 0, "basis": [[1]]}]}
    doc.update(overrides)
    return json.dumps(doc)


@given(seeds)
def test_module_round_trip(seed):
    rng = random.Random(seed)
    m = (random_admissible if rng.random() < 0.5 else random_module)(rng)
    text = dumps(Document("module", m))
    back = loads(text)
    assert back.value == m
    assert dumps(back) == text


@given(seeds)
def test_complex_round_trip(seed):
    c = random_complex(random.Random(seed))
    text = dumps(Document("complex", c))
    assert loads(text).value == c
    assert dumps(loads(text)) == text


def test_ph_complex_round_trip():
    m = padded_ph(random_admissible(random.Random(3)))
    text = dumps(Document("ph_complex", m))
    back = loads(text).value
    assert back.m0 == m.m0 and back.mk.terms == m.mk.terms and back.a == m.a
    assert dumps(loads(text)) == text


def test_meta_preserved():
    text = _module_json(name="x", comment="c", expected={"h_st": [1, 1, 0]})
    doc = loads(text)
    assert doc.meta == {"name": "x", "comment": "c", "expected": {"h_st": [1, 1, 0]}}
    assert loads(dumps(doc)).meta == doc.meta


def test_rationals_are_strings():
    out = json.loads(dumps(Document("module", loads(_module_json(phi=[["3/6"]])).value)))
    assert out["phi"] == [["1/2"]]


@pytest.mark.parametrize("text,pointer", [
    (_module_json(phi=[[0.5]]), "/phi/0/0"),
    (_module_json(phi=[["x"]]), "/phi/0/0"),
    (_module_json(phi=[[1, 2]]), "/phi/0"),
    (_module_json(dim=-1), "/dim"),
    (_module_json(filtration=[{"basis": [[1]]}]), "/filtration/0/jump"),
    (json.dumps({"p": 5, "dim": 1, "filtration": []}), "/phi"),
    (json.dumps({"kind": "sheaf"}), "/kind"),
    ("[1, 2]", "/"),
    ("{", "/"),
])
def test_malformed_pointer(text, pointer):
    with pytest.raises(FormatError) as e:
        loads(text)
    assert e.value.pointer == pointer


@pytest.mark.parametrize("text,pointer,identity", [
    (_module_json(dim=2, phi=[[1, 0], [0, 1]], n=[[0, 1], [0, 0]],
                  filtration=[{"jump": 0, "basis": [[1, 0], [0, 1]]}]), "/n", "Nφ ≠ pφN"),
    (_module_json(phi=[[0]]), "/phi", "φ invertible"),
    (_module_json(p=6), "/p", "p prime"),
    (_module_json(comparison=[[0]]), "/comparison", "comparison invertible"),
])
def test_invalid_pointer(text, pointer, identity):
    with pytest.raises(InvalidDocument) as e:
        loads(text)
    assert [(d.pointer, d.identity) for d in e.value.diagnostics] == [(pointer, identity)]


def test_complex_differential_pointer():
    mod = {"dim": 1, "phi": [[1]], "filtration": [{"jump": 0, "basis": [[1]]}]}
    other = {"dim": 1, "phi": [[2]], "filtration": [{"jump": 0, "basis": [[1]]}]}
    text = json.dumps({"kind": "complex", "p": 5, "min_deg": 0, "terms": [mod, other], "differentials": [[[1]]]})
    with pytest.raises(InvalidDocument) as e:
        loads(text)
    assert e.value.diagnostics[0].pointer == "/differentials/0"


def test_non_filtered_differential_reported():
    lo = {"dim": 1, "phi": [[1]], "filtration": [{"jump": 0, "basis": [[1]]}]}
    hi = {"dim": 1, "phi": [[1]], "filtration": [{"jump": 1, "basis": [[1]]}]}
    ok = json.dumps({"kind": "complex", "p": 5, "min_deg": 0, "terms": [lo, hi], "differentials": [[[1]]]})
    assert loads(ok).value.dim(1) == 1
    bad = json.dumps({"kind": "complex", "p": 5, "min_deg": 0, "terms": [hi, lo], "differentials": [[[1]]]})
    with pytest.raises(InvalidDocument) as e:
        loads(bad)
    assert e.value.diagnostics[0].pointer == "/differentials"
