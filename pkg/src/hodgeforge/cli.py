"""``hodge``: command-line front end.

Exit codes: 0 on success (a negative admissibility verdict is a result, not
an error), 1 on a domain error such as an invariant violation, 2 on
malformed input or usage.
"""

from __future__ import annotations

import argparse
import sys
from typing import Callable

from .chains import ComplexError
from .dfmod import DFComplex, FilteredPhiNModule, h_st_dims, hom_flat, is_weakly_admissible
from .exactlin import Mat
from .filtered import FiltrationError
from .formats import Document, FormatError, InvalidDocument, dumps, encode_matrix, load, pretty
from .phimod import InvalidModule, PrimeMismatch
from .phodge import (
    NonStrictComplex,
    PadicHodgeComplex,
    cohomology_module,
    is_admissible_pH,
    syntomic_cohomology,
    theta,
)
from .syntomic import LefschetzError, c_pst, check_degeneration, descent_ss, exp_bk


class DomainError(Exception):
    pass


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _as_ph(doc: Document) -> PadicHodgeComplex:
    return doc.value if doc.kind == "ph_complex" else theta(doc.value)


def _module(doc: Document, command: str) -> FilteredPhiNModule:
    if doc.kind != "module":
        raise DomainError(f"{command} takes a module file, got a {doc.kind}")
    return doc.value


def _df(doc: Document, command: str) -> DFComplex:
    if doc.kind == "ph_complex":
        raise DomainError(f"{command} takes a module or complex file, got a ph_complex")
    return DFComplex.of(doc.value)


def _dims_text(label: str, dims: list[int], lo: int) -> str:
    return f"{label} = {dims}" if lo == 0 else f"{label} = {dims} (from degree {lo})"


def _verdict_json(v) -> dict:
    out = {"status": v.status, "t_N": v.t_N, "t_H": v.t_H, "summary": v.summary()}
    if v.witness is not None:
        out["witness"] = [[str(x) for x in b] for b in v.witness.basis]
        out["witness_t_N"], out["witness_t_H"] = v.sub_t_N, v.sub_t_H
    if v.trials is not None:
        out["trials"] = v.trials
    if v.status == "ProbablyAdmissible" or v.seed is not None:
        out["seed"] = v.seed
    return out


def cmd_validate(args, docs):
    doc = docs[0]
    if doc.kind == "module":
        text = f"ok: module p={doc.value.p} dim={doc.value.dim}"
        dims = [doc.value.dim]
    elif doc.kind == "complex":
        c = doc.value
        dims = [c.dim(n) for n in c.degrees]
        text = f"ok: complex p={c.p} degrees {c.min_deg}..{max(c.degrees)} dims {dims}"
    else:
        m = doc.value
        dims = [m.m0.dim(n) for n in m.degrees]
        text = f"ok: ph_complex p={m.p} degrees {m.m0.min_deg}..{max(m.degrees)} dims {dims}"
    return text, {"ok": True, "kind": doc.kind, "dims": dims}


def cmd_adm(args, docs):
    doc = docs[0]
    seed = args.probabilistic_seed
    if doc.kind == "module":
        v = is_weakly_admissible(doc.value, seed=seed)
        return v.summary(), _verdict_json(v)
    ph = _as_ph(doc)
    try:
        ok = is_admissible_pH(ph, seed=seed)
    except NonStrictComplex as e:
        raise DomainError(str(e)) from None
    lines, per = [], {}
    for n in ph.degrees:
        h = cohomology_module(ph, n)
        if h.dim:
            v = is_weakly_admissible(h, seed=seed)
            lines.append(f"H^{n}: {v.summary()}")
            per[str(n)] = _verdict_json(v)
    lines.append("admissible" if ok else "not admissible")
    return "\n".join(lines), {"admissible": ok, "cohomology": per}


def cmd_ext(args, docs):
    a, b = (_df(d, "ext") for d in docs)
    c = hom_flat(a, b)
    dims = c.cohomology_dims()
    return _dims_text("Ext", dims, c.min_deg), {"min_deg": c.min_deg, "dims": dims}


def cmd_hst(args, docs):
    d = _df(docs[0], "hst")
    dims = h_st_dims(d)
    return f"h_st = {dims}", {"h_st": dims}


def cmd_syn(args, docs):
    res = syntomic_cohomology(_as_ph(docs[0]), args.r)
    return (_dims_text(f"H_syn(r={args.r})", res.dims, res.min_deg),
            {"r": args.r, "min_deg": res.min_deg, "dims": res.dims})


def cmd_twist(args, docs):
    doc = docs[0]
    if doc.kind == "ph_complex":
        raise DomainError("twist takes a module or complex file")
    if args.r == 0:
        out = doc
    else:
        out = Document(doc.kind, doc.value.twisted(args.r), {}, doc.extra)
    return None, dumps(out)


def cmd_tensor(args, docs):
    a, b = (_module(d, "tensor") for d in docs)
    return None, dumps(Document("module", a.tensor(b)))


def _page_text(ss) -> list[str]:
    lines = []
    for r in sorted(ss.pages):
        if r < 1:
            continue
        page = ss.pages[r]
        cells = ", ".join(f"({p},{q}):{v}" for (p, q), v in sorted(page.items()))
        lines.append(f"E_{r}: {cells or 'zero'}")
    return lines


def cmd_ss(args, docs):
    d = _df(docs[0], "ss")
    ss = descent_ss(d, args.r)
    lines = _page_text(ss)
    lines.append("abutment: " + ", ".join(f"H^{n}={v}" for n, v in sorted(ss.abutment.items())))
    lines.append(f"converged at E_{ss.converged_at}")
    return "\n".join(lines), ss.to_json()


def cmd_degen(args, docs):
    doc = docs[0]
    if doc.kind != "complex" or "lefschetz" not in doc.extra:
        raise DomainError("degen takes a complex file with 'lefschetz' and 'middle' fields")
    rep = check_degeneration(doc.value, doc.extra["lefschetz"], doc.extra["middle"], args.r)
    prim = ", ".join(f"P^{i}={v}" for i, v in sorted(rep.primitive_dims.items()))
    text = "\n".join([
        f"degenerate at E_2: {'yes' if rep.degenerate else 'no'} (converged at E_{rep.converged_at})",
        "hard Lefschetz: " + ", ".join(f"L^{k}:{'iso' if ok else 'fails'}" for k, ok in sorted(rep.hard_lefschetz.items())),
        f"primitive parts: {prim}",
        f"primitive decomposition: {'ok' if rep.decomposition_ok else 'fails'}",
    ])
    return text, rep.to_json()


def cmd_exp_bk(args, docs):
    m = _module(docs[0], "exp-bk")
    e = exp_bk(m)
    c = c_pst(m)
    h1 = c.cohomology_dims()[1]
    rank = e.rank()
    text = (f"exp_BK: D_K/F^0 (dim {e.cols}) -> H^1 (dim {h1}), rank {rank}"
            f"{', injective' if rank == e.cols else ''}")
    return text, {"source_dim": e.cols, "h1_dim": h1, "rank": rank, "matrix": encode_matrix(e)}


COMMANDS: dict[str, tuple[Callable, int, str]] = {
    "validate": (cmd_validate, 1, "check a module, complex or p-adic Hodge complex file"),
    "adm": (cmd_adm, 1, "weak admissibility verdict"),
    "ext": (cmd_ext, 2, "dimensions of Ext between two modules or complexes"),
    "hst": (cmd_hst, 1, "dimensions of H^i_st of a module or complex"),
    "syn": (cmd_syn, 1, "syntomic cohomology dimensions"),
    "twist": (cmd_twist, 1, "Tate twist, printed as a canonical file"),
    "tensor": (cmd_tensor, 2, "tensor product of two modules, printed as a canonical file"),
    "ss": (cmd_ss, 1, "syntomic descent spectral sequence pages"),
    "degen": (cmd_degen, 1, "E_2-degeneration and Lefschetz decomposition check"),
    "exp-bk": (cmd_exp_bk, 1, "Bloch-Kato exponential on D_K/F^0"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hodge", description="Exact computations with filtered (φ,N,G)-modules.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, nfiles, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("files", nargs=nfiles, metavar="FILE")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--probabilistic-seed", type=int, default=None, metavar="SEED",
                        help="seed for the sampled subobject scan; echoed in the report")
        if name in ("syn", "twist", "ss", "degen"):
            sp.add_argument("--r", type=int, default=0, help="twist")
    return parser


def _emit(obj_or_text, as_json: bool) -> None:
    if as_json and not isinstance(obj_or_text, str):
        sys.stdout.write(pretty(obj_or_text) + "\n")
    else:
        sys.stdout.write(obj_or_text if obj_or_text.endswith("\n") else obj_or_text + "\n")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        sys.stderr.write(f"hodge: error: {e}\n")
        return 2
    func = COMMANDS[args.command][0]
    as_json = args.json
    try:
        docs = [load(f) for f in args.files]
        text, data = func(args, docs)
    except OSError as e:
        return _fail(2, "io", str(e), as_json)
    except FormatError as e:
        return _fail(2, "malformed", str(e), as_json, [{"pointer": e.pointer, "detail": e.message}])
    except InvalidDocument as e:
        return _fail(1, "invalid", str(e), as_json, [d.to_json() for d in e.diagnostics])
    except (DomainError, InvalidModule, PrimeMismatch, ComplexError, FiltrationError,
            LefschetzError, NonStrictComplex) as e:
        return _fail(1, "error", str(e), as_json)
    if text is None:
        _emit(data, False)
    elif as_json:
        if args.probabilistic_seed is not None and isinstance(data, dict):
            data.setdefault("seed", args.probabilistic_seed)
        _emit(data, True)
    else:
        if args.probabilistic_seed is not None and "seed" not in text:
            text += f"\nseed: {args.probabilistic_seed}"
        _emit(text, False)
    return 0


def _fail(code: int, kind: str, message: str, as_json: bool, details=None) -> int:
    if as_json:
        body = {"ok": False, "error": kind, "message": message}
        if details:
            body["diagnostics"] = details
        sys.stdout.write(pretty(body) + "\n")
    else:
        sys.stderr.write(f"hodge: {kind}: {message}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
