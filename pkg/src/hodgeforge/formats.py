"""JSON encoding of modules and complexes, with JSON-pointer diagnostics.

Rationals are written as strings "a" or "a/b"; matrices as lists of rows.
Three document kinds exist:

* ``module``: one filtered (φ,N,G)-module;
* ``complex``: a complex of such modules (differentials act on D₀), with an
  optional Lefschetz operator for degeneration checks;
* ``ph_complex``: a p-adic Hodge complex given by (m0, mk, a).

Keys ``name``, ``comment`` and ``expected`` are carried through unchanged.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .dfmod import DFComplex, FilteredPhiNModule
from .exactlin import Mat, Subspace
from .filtered import FilteredComplex, FilteredSpace, FiltrationError
from .phimod import GroupData, InvalidModule, ModuleComplex, PhiNModule, Violation
from .phodge import PadicHodgeComplex, validate_pH

META_KEYS = ("name", "comment", "expected")

# Where each named identity lives in a module document.
_MODULE_FIELDS = {
    "shape": "phi",
    "p prime": "p",
    "φ invertible": "phi",
    "Nφ ≠ pφN": "n",
    "N nilpotent": "n",
    "dim D_K = dim D₀": "filtration",
    "comparison invertible": "comparison",
    "group table": "group/table",
    "group rep": "group/rep",
    "ρ(gh) = ρ(g)ρ(h)": "group/rep",
    "ρ commutes with φ, N": "group/rep",
    "filtration G-stable": "filtration",
}


class FormatError(ValueError):
    """Malformed document: wrong JSON shape or types."""

    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer or "/"
        self.message = message


@dataclass
class Diagnostic:
    pointer: str
    identity: str
    detail: str

    def __str__(self) -> str:
        return f"{self.pointer}: {self.identity}: {self.detail}"

    def to_json(self) -> dict:
        return {"pointer": self.pointer, "identity": self.identity, "detail": self.detail}


class InvalidDocument(ValueError):
    """Well-formed document whose contents violate a structural identity."""

    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__("; ".join(str(d) for d in diagnostics))
        self.diagnostics = diagnostics


@dataclass
class Document:
    kind: str
    value: Any
    meta: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)


# Reading.

def _rational(x, ptr: str) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise FormatError(ptr, "expected an exact rational (integer or string 'a/b')")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise FormatError(ptr, f"cannot parse {x!r} as a rational") from None
    raise FormatError(ptr, f"expected a rational, got {type(x).__name__}")


def _int(x, ptr: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise FormatError(ptr, "expected an integer")
    return x


def _get(obj: dict, key: str, ptr: str):
    if not isinstance(obj, dict):
        raise FormatError(ptr, "expected an object")
    if key not in obj:
        raise FormatError(f"{ptr}/{key}", "missing field")
    return obj[key]


def _matrix(x, rows: int, cols: int, ptr: str) -> Mat:
    if not isinstance(x, list):
        raise FormatError(ptr, "expected a list of rows")
    if len(x) != rows:
        raise FormatError(ptr, f"expected {rows} rows, got {len(x)}")
    out = []
    for i, row in enumerate(x):
        if not isinstance(row, list) or len(row) != cols:
            raise FormatError(f"{ptr}/{i}", f"expected a row of length {cols}")
        out.append([_rational(v, f"{ptr}/{i}/{j}") for j, v in enumerate(row)])
    return Mat(out, rows, cols) if rows else Mat.zeros(0, cols)


def _vectors(x, dim: int, ptr: str) -> list[tuple]:
    if not isinstance(x, list):
        raise FormatError(ptr, "expected a list of vectors")
    out = []
    for k, v in enumerate(x):
        if not isinstance(v, list) or len(v) != dim:
            raise FormatError(f"{ptr}/{k}", f"expected a vector of length {dim}")
        out.append(tuple(_rational(e, f"{ptr}/{k}/{j}") for j, e in enumerate(v)))
    return out


def _filtration(x, dim: int, ptr: str) -> FilteredSpace:
    if not isinstance(x, list):
        raise FormatError(ptr, "expected a list of {jump, basis} entries")
    pieces = {}
    for k, entry in enumerate(x):
        jump = _int(_get(entry, "jump", f"{ptr}/{k}"), f"{ptr}/{k}/jump")
        pieces[jump] = Subspace(dim, _vectors(_get(entry, "basis", f"{ptr}/{k}"), dim, f"{ptr}/{k}/basis"))
    if dim == 0:
        return FilteredSpace(0, {})
    if not pieces:
        raise FormatError(ptr, "a nonzero space needs at least one filtration step")
    try:
        return FilteredSpace(dim, pieces)
    except FiltrationError as e:
        raise InvalidDocument([Diagnostic(ptr, "filtration", str(e))]) from None


def _group(x, dim: int, ptr: str) -> GroupData:
    order = _int(_get(x, "order", ptr), f"{ptr}/order")
    table = _get(x, "table", ptr)
    if not isinstance(table, list) or any(not isinstance(r, list) for r in table):
        raise FormatError(f"{ptr}/table", "expected a square list of lists")
    table = tuple(tuple(_int(v, f"{ptr}/table/{i}/{j}") for j, v in enumerate(r)) for i, r in enumerate(table))
    reps = _get(x, "rep", ptr)
    if not isinstance(reps, list):
        raise FormatError(f"{ptr}/rep", "expected a list of matrices")
    return GroupData(order, table, tuple(_matrix(m, dim, dim, f"{ptr}/rep/{k}") for k, m in enumerate(reps)))


def _diagnostics(violations, prefix: str, fields: dict) -> list[Diagnostic]:
    return [Diagnostic(f"{prefix}/{fields.get(v.identity, '')}".rstrip("/"), v.identity, v.detail)
            for v in violations]


def parse_module(x, ptr: str = "", p: int | None = None) -> FilteredPhiNModule:
    if p is None:
        p = _int(_get(x, "p", ptr), f"{ptr}/p")
    dim = _int(_get(x, "dim", ptr), f"{ptr}/dim")
    if dim < 0:
        raise FormatError(f"{ptr}/dim", "dimension must be non-negative")
    phi = _matrix(_get(x, "phi", ptr), dim, dim, f"{ptr}/phi")
    n_op = _matrix(x["n"], dim, dim, f"{ptr}/n") if "n" in x else Mat.zeros(dim, dim)
    fil = _filtration(_get(x, "filtration", ptr), dim, f"{ptr}/filtration")
    comp = _matrix(x["comparison"], dim, dim, f"{ptr}/comparison") if "comparison" in x else None
    group = _group(x["group"], dim, f"{ptr}/group") if "group" in x else None
    m = FilteredPhiNModule(PhiNModule(p, phi, n_op), fil, comp, group, validate=False)
    problems = m.problems()
    if problems:
        raise InvalidDocument(_diagnostics(problems, ptr, _MODULE_FIELDS))
    return m


def parse_complex(x, ptr: str = "") -> tuple[DFComplex, dict]:
    p = _int(_get(x, "p", ptr), f"{ptr}/p")
    lo = _int(_get(x, "min_deg", ptr), f"{ptr}/min_deg")
    terms = _get(x, "terms", ptr)
    if not isinstance(terms, list) or not terms:
        raise FormatError(f"{ptr}/terms", "expected a nonempty list of modules")
    mods = [parse_module(t, f"{ptr}/terms/{k}", p) for k, t in enumerate(terms)]
    diffs_raw = _get(x, "differentials", ptr)
    if not isinstance(diffs_raw, list) or len(diffs_raw) != len(mods) - 1:
        raise FormatError(f"{ptr}/differentials", f"expected {len(mods) - 1} matrices")
    diffs = [_matrix(d, mods[k + 1].dim, mods[k].dim, f"{ptr}/differentials/{k}") for k, d in enumerate(diffs_raw)]
    if len({m.galois is None for m in mods}) > 1:
        raise FormatError(f"{ptr}/terms", "either every term carries a group action or none does")
    c = DFComplex(lo, mods, diffs, validate=False)
    groups = [m.galois for m in mods] if c.has_group() else None
    problems = ModuleComplex(lo, [m.base for m in mods], diffs, groups, validate=False).problems()
    if problems:
        raise InvalidDocument([Diagnostic(_complex_pointer(ptr, v, lo), v.identity, v.detail) for v in problems])
    try:
        c.dr()
    except FiltrationError as e:
        raise InvalidDocument([Diagnostic(f"{ptr}/differentials", "filtered differential", str(e))]) from None
    extra = {}
    if "lefschetz" in x:
        raw = x["lefschetz"]
        if not isinstance(raw, list) or len(raw) != len(mods):
            raise FormatError(f"{ptr}/lefschetz", f"expected {len(mods)} matrices")
        extra["lefschetz"] = [_matrix(m, c.dim(lo + k + 2), mods[k].dim, f"{ptr}/lefschetz/{k}")
                              for k, m in enumerate(raw)]
        extra["middle"] = _int(_get(x, "middle", ptr), f"{ptr}/middle")
    return c, extra


def _complex_pointer(ptr: str, v: Violation, lo: int) -> str:
    detail = v.detail
    if detail.startswith("degree "):
        try:
            n = int(detail.split()[1].rstrip(":,"))
        except ValueError:
            return ptr or "/"
        if v.identity in ("dφ = φd", "dN = Nd", "d∘d = 0", "dρ = ρd", "shape"):
            return f"{ptr}/differentials/{n - lo}"
        return f"{ptr}/terms/{n - lo}/{_MODULE_FIELDS.get(v.identity, '')}".rstrip("/")
    return ptr or "/"


def parse_ph_complex(x, ptr: str = "") -> PadicHodgeComplex:
    p = _int(_get(x, "p", ptr), f"{ptr}/p")
    lo = _int(_get(x, "min_deg", ptr), f"{ptr}/min_deg")
    m0_raw, mk_raw = _get(x, "m0", ptr), _get(x, "mk", ptr)
    if not isinstance(m0_raw, list) or not isinstance(mk_raw, list) or len(m0_raw) != len(mk_raw) or not m0_raw:
        raise FormatError(ptr, "m0 and mk must be nonempty lists of the same length")
    mods, groups, terms, kgroups = [], [], [], []
    for k, t in enumerate(m0_raw):
        q = f"{ptr}/m0/{k}"
        dim = _int(_get(t, "dim", q), f"{q}/dim")
        phi = _matrix(_get(t, "phi", q), dim, dim, f"{q}/phi")
        n_op = _matrix(t["n"], dim, dim, f"{q}/n") if "n" in t else Mat.zeros(dim, dim)
        mods.append(PhiNModule(p, phi, n_op))
        groups.append(_group(t["group"], dim, f"{q}/group") if "group" in t else None)
    for k, t in enumerate(mk_raw):
        q = f"{ptr}/mk/{k}"
        dim = _int(_get(t, "dim", q), f"{q}/dim")
        terms.append(_filtration(_get(t, "filtration", q), dim, f"{q}/filtration"))
        kgroups.append(_group(t["group"], dim, f"{q}/group") if "group" in t else None)
    if len({g is None for g in groups + kgroups}) > 1:
        raise FormatError(ptr, "either every term carries a group action or none does")
    d0 = _diff_list(x, "m0_differentials", [m.dim for m in mods], ptr)
    dk = _diff_list(x, "mk_differentials", [t.dim for t in terms], ptr)
    a_raw = _get(x, "a", ptr)
    if not isinstance(a_raw, list) or len(a_raw) != len(mods):
        raise FormatError(f"{ptr}/a", f"expected {len(mods)} matrices")
    a = [_matrix(m, terms[k].dim, mods[k].dim, f"{ptr}/a/{k}") for k, m in enumerate(a_raw)]
    has_g = groups[0] is not None
    m0 = ModuleComplex(lo, mods, d0, groups if has_g else None, validate=False)
    problems = m0.problems()
    if problems:
        raise InvalidDocument([Diagnostic(_complex_pointer(f"{ptr}/m0", v, lo).replace("/m0/differentials", "/m0_differentials"),
                                          v.identity, v.detail) for v in problems])
    try:
        mk = FilteredComplex(lo, terms, dk)
    except (FiltrationError, ValueError) as e:
        raise InvalidDocument([Diagnostic(f"{ptr}/mk_differentials", "filtered differential", str(e))]) from None
    ph = PadicHodgeComplex(m0, mk, a, kgroups if has_g else None, validate=False)
    problems = validate_pH(ph)
    if problems:
        raise InvalidDocument([Diagnostic(f"{ptr}/a", v.identity, v.detail) for v in problems])
    return ph


def _diff_list(x, key: str, dims: list[int], ptr: str) -> list[Mat]:
    raw = _get(x, key, ptr)
    if not isinstance(raw, list) or len(raw) != len(dims) - 1:
        raise FormatError(f"{ptr}/{key}", f"expected {len(dims) - 1} matrices")
    return [_matrix(m, dims[k + 1], dims[k], f"{ptr}/{key}/{k}") for k, m in enumerate(raw)]


def parse_document(obj) -> Document:
    if not isinstance(obj, dict):
        raise FormatError("", "top level must be an object")
    kind = obj.get("kind", "module")
    meta = {k: obj[k] for k in META_KEYS if k in obj}
    if kind == "module":
        return Document(kind, parse_module(obj), meta)
    if kind == "complex":
        c, extra = parse_complex(obj)
        return Document(kind, c, meta, extra)
    if kind == "ph_complex":
        return Document(kind, parse_ph_complex(obj), meta)
    raise FormatError("/kind", f"unknown kind {kind!r}")


def loads(text: str) -> Document:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError("", f"invalid JSON: {e.msg} at line {e.lineno} column {e.colno}") from None
    return parse_document(obj)


def load(path) -> Document:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


# Writing.

def _q(x: Fraction) -> str:
    return str(Fraction(x))


def encode_matrix(m: Mat) -> list:
    return [[_q(v) for v in row] for row in m.tolist()]


def encode_filtration(f: FilteredSpace) -> list:
    return [{"jump": i, "basis": [[_q(v) for v in b] for b in f.jumps[i].basis]} for i in sorted(f.jumps)]


def encode_group(g: GroupData) -> dict:
    return {"order": g.order, "table": [list(r) for r in g.mult_table], "rep": [encode_matrix(r) for r in g.rep]}


def encode_module(m: FilteredPhiNModule, with_p: bool = True) -> dict:
    out = {"dim": m.dim, "phi": encode_matrix(m.phi), "n": encode_matrix(m.n_op),
           "filtration": encode_filtration(m.dr_side)}
    if with_p:
        out = {"kind": "module", "p": m.p, **out}
    if m.comparison != Mat.identity(m.dim):
        out["comparison"] = encode_matrix(m.comparison)
    if m.galois is not None:
        out["group"] = encode_group(m.galois)
    return out


def encode_complex(c: DFComplex, extra: dict | None = None) -> dict:
    out = {"kind": "complex", "p": c.p, "min_deg": c.min_deg,
           "terms": [encode_module(m, with_p=False) for m in c.modules],
           "differentials": [encode_matrix(d) for d in c.differentials]}
    if extra and "lefschetz" in extra:
        out["lefschetz"] = [encode_matrix(m) for m in extra["lefschetz"]]
        out["middle"] = extra["middle"]
    return out


def encode_ph_complex(m: PadicHodgeComplex) -> dict:
    m0 = []
    for n in m.degrees:
        mod = m.m0.module(n)
        t = {"dim": mod.dim, "phi": encode_matrix(mod.phi), "n": encode_matrix(mod.n_op)}
        if m.m0.groups is not None:
            t["group"] = encode_group(m.m0.group(n))
        m0.append(t)
    mk = []
    for n in m.degrees:
        t = {"dim": m.mk.dim(n), "filtration": encode_filtration(m.mk.term(n))}
        if m.k_groups is not None:
            t["group"] = encode_group(m.k_group(n))
        mk.append(t)
    return {"kind": "ph_complex", "p": m.p, "min_deg": m.m0.min_deg, "m0": m0,
            "m0_differentials": [encode_matrix(d) for d in m.m0.differentials],
            "mk": mk, "mk_differentials": [encode_matrix(d) for d in m.mk.differentials],
            "a": [encode_matrix(x) for x in m.a]}


def encode_document(doc: Document) -> dict:
    if doc.kind == "module":
        out = encode_module(doc.value)
    elif doc.kind == "complex":
        out = encode_complex(doc.value, doc.extra)
    else:
        out = encode_ph_complex(doc.value)
    out.update(doc.meta)
    return out


def pretty(obj, indent: int = 0) -> str:
    """Sorted-key JSON with lists of scalars kept on one line."""
    pad, inner = " " * indent, " " * (indent + 2)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k), ensure_ascii=False)}: {pretty(obj[k], indent + 2)}"
                 for k in sorted(obj, key=str)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(json.dumps(v, ensure_ascii=False) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + pretty(v, indent + 2) for v in obj) + "\n" + pad + "]"
    return json.dumps(obj, ensure_ascii=False)


def dumps(doc: Document) -> str:
    return pretty(encode_document(doc)) + "\n"


def save(doc: Document, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(doc))
