"""Command-line front end.  Every subcommand prints one JSON report on stdout.

Exit codes: 0 success, 1 validation failure, 2 budget exceeded, 3 I/O or parse error.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Sequence

import numpy as np

from . import io
from .completeness import antichain_amplification, has_ip, is_simple, opc_bruteforce, opc_wille, wille_property
from .errors import BudgetExceeded, LatticeLabError, ValidationError
from .gallery import make_boolean, make_example, make_mn, make_mo2, make_mo3, random_lattice
from .lattice import DEFAULT_MAX_TUPLES, Lattice, is_distributive
from .order import (
    DEFAULT_MAX_FUNCTIONS,
    count_monotone,
    extend_partial,
    heights,
    longest_chain,
    max_antichain,
    min_chain_cover,
    mirsky_layers,
    ramsey_witness,
)
from .ortho import OrthoLattice, factorization_report, is_de_morgan
from .polynomials import DEFAULT_MAX_CLONE, interpolate, polynomial_clone
from .terms import format_term

EXIT_OK, EXIT_VALIDATION, EXIT_BUDGET, EXIT_IO = 0, 1, 2, 3

CHECKS = ("simple", "wille", "opc-wille", "distributive", "width", "height", "opc-brute", "ip")
DEFAULT_CHECKS = "simple,wille,opc-wille,distributive,width,height"


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return x


def _emit(doc: dict, out) -> None:
    out.write(json.dumps(_jsonable(doc), indent=2) + "\n")


def _lattice(algebra) -> Lattice:
    return getattr(algebra, "lattice", algebra)


# --- subcommands ----------------------------------------------------------

def cmd_validate(args) -> dict:
    A = io.read_lattice(args.file)
    L = _lattice(A)
    return {"format": "validate-report-v1", "valid": True, "n": L.n, "bottom": L.bottom, "top": L.top,
            "covers": len(L.poset.covers()), "ortho": isinstance(A, OrthoLattice)}


def cmd_analyze(args) -> dict:
    L = _lattice(io.read_lattice(args.file))
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    for c in checks:
        if c not in CHECKS:
            raise io.FormatError(f"unknown check {c!r}; choose from {', '.join(CHECKS)}")
    rep: dict = {"format": "analyze-report-v1", "n": L.n}
    for c in checks:
        key = c.replace("-", "_")
        if c == "simple":
            ok, w = is_simple(L)
            rep[key] = ok
            if not ok:
                rep["simple_witness"] = {"pair": list(w[0]), "blocks": w[1].blocks}
        elif c == "wille":
            ok, w = wille_property(L)
            rep[key] = ok
            if not ok:
                rep["wille_witness"] = w
        elif c == "opc-wille":
            rep[key] = opc_wille(L).verdict
        elif c == "distributive":
            rep[key] = is_distributive(L)
        elif c == "width":
            rep[key] = len(max_antichain(L.poset))
        elif c == "height":
            rep[key] = int(heights(L.poset).max())
        elif c in ("opc-brute", "ip"):
            per = {}
            for k in args.arity:
                if c == "ip":
                    ok, w = has_ip(L, k, max_clone=args.max_size, max_functions=args.max_functions)
                    per[str(k)] = {"ip": ok} if ok else {"ip": ok, "witness": w[0].values}
                else:
                    o = opc_bruteforce(L, k, max_clone=args.max_size, max_functions=args.max_functions)
                    entry = {"status": o.status, "method": o.method}
                    if o.witness is not None:
                        entry["witness"] = o.witness.values
                    per[str(k)] = entry
            rep[key] = per
    return rep


def cmd_clone(args) -> dict:
    L = _lattice(io.read_lattice(args.file))
    rows = io.read_points(args.restrict, L, args.arity) if args.restrict else None
    c = polynomial_clone(L, args.arity, rows, max_size=args.max_size)
    rep = {"format": "clone-report-v1", "arity": args.arity, "rows": c.rows, "size": len(c), "rounds": c.rounds}
    if not args.summary:
        members = []
        for i in range(len(c)):
            m = {"table": c.tables[i]}
            if args.emit_term:
                m["term"] = format_term(c.term(i))
            members.append(m)
        rep["members"] = members
    return rep


def cmd_interpolate(args) -> dict:
    L = _lattice(io.read_lattice(args.file))
    f = io.read_function(args.fn, L)
    t = interpolate(L, f, max_size=args.max_size)
    rep = {"format": "interpolate-report-v1", "result": "none" if t is None else "polynomial"}
    if t is not None and args.emit_term:
        rep["term"] = format_term(t)
    return rep


def cmd_extend(args) -> dict:
    L = _lattice(io.read_lattice(args.file))
    g = extend_partial(io.read_function(args.fn, L))
    return {"format": "extend-report-v1", "arity": g.arity, "table": g.values}


def cmd_antichain(args) -> dict:
    L = _lattice(io.read_lattice(args.file))
    a = max_antichain(L.poset)
    return {"format": "antichain-report-v1", "width": len(a), "antichain": a, "chain_cover": min_chain_cover(L.poset)}


def cmd_chain(args) -> dict:
    L = _lattice(io.read_lattice(args.file))
    c = longest_chain(L.poset)
    return {"format": "chain-report-v1", "height": len(c), "chain": c, "layers": mirsky_layers(L.poset)}


def cmd_ramsey(args) -> dict:
    L = _lattice(io.read_lattice(args.file))
    w = ramsey_witness(L.poset, args.r, args.s)
    return {"format": "ramsey-report-v1", "r": args.r, "s": args.s, "kind": w.kind, "elements": list(w.elements)}


def cmd_count_monotone(args) -> dict:
    L = _lattice(io.read_lattice(args.file))
    return {"format": "count-monotone-report-v1", "arity": args.arity, "count": count_monotone(L, args.arity, args.limit)}


def _int_csv(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from e


def cmd_gallery(args) -> dict:
    kind = args.kind
    if kind == "mn":
        A = make_mn(args.atoms)
    elif kind in ("example1", "example2", "example3"):
        if not args.blocks:
            raise io.FormatError(f"{kind} needs --blocks")
        A = make_example(int(kind[-1]), args.blocks)
    elif kind == "boolean":
        A = make_boolean(args.atoms, max_elements=args.max_tuples)
    elif kind == "mo2":
        A = make_mo2()
    elif kind == "mo3":
        A = make_mo3()
    else:
        A = random_lattice(args.size, args.seed)
    doc = io.lattice_to_dict(A)
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(io.dumps(doc))
        except OSError as e:
            raise io.FormatError(f"cannot write {args.output}: {e.strerror or e}") from e
        return {"format": "gallery-report-v1", "kind": kind, "n": doc["n"], "output": args.output}
    return doc


def cmd_ortho_check(args) -> dict:
    A = io.read_lattice(args.file)
    if not isinstance(A, OrthoLattice):
        raise io.FormatError(f"{args.file}: no 'perp' field")
    return {"format": "ortho-check-report-v1", "valid": True, "n": A.n, "de_morgan": is_de_morgan(A)}


def cmd_ortho_factor(args) -> dict:
    A = io.read_lattice(args.file)
    if not isinstance(A, OrthoLattice):
        raise io.FormatError(f"{args.file}: no 'perp' field")
    f = io.read_function(args.fn, A.lattice)
    r = factorization_report(A, f)
    return {
        "format": "ortho-factor-report-v1",
        "identity_verified": r.identity_verified,
        "antichain": r.antichain,
        "g_monotone": r.g_monotone,
        "h_monotone": r.h_monotone,
        "sum_size": r.O1.n,
        "embed_O": r.embed_O,
        "embed_OO": r.embed_OO,
        "A": r.A,
        "g1": r.g1,
        "g2": r.g2,
        "h": [[a, int(r.h.values[a])] for a in r.A],
        "failures": r.failures,
    }


def cmd_amplify(args) -> dict:
    L = _lattice(io.read_lattice(args.file))
    out = antichain_amplification(L, args.antichain, max_size=args.max_size)
    rep = {"format": "amplify-report-v1", "family_size": len(out.family), "polynomial": out.polynomial}
    if not out.polynomial:
        rep["witness"] = out.witness.values
        return rep
    rep["group"] = out.group
    rep["slots"] = out.slots
    rep["coefficients"] = [list(c) for c in out.antichain]
    rep["violations"] = [list(v) for v in out.thinning.violations]
    if args.emit_term:
        rep["template"] = format_term(out.thinning.template)
        rep["terms"] = [format_term(t) for t in out.terms]
    return rep


# --- parser ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="latticelab", description="Finite lattice polynomial toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help: str, fn_file=False, clone_budget=False):
        q = sub.add_parser(name, help=help)
        q.set_defaults(handler=fn)
        if name != "gallery":
            q.add_argument("file")
        if fn_file:
            q.add_argument("--fn", required=True, help="fn-v1 function file")
        if clone_budget:
            q.add_argument("--max-size", type=int, default=DEFAULT_MAX_CLONE, help="clone member budget")
        return q

    add("validate", cmd_validate, "check a lattice file")
    q = add("analyze", cmd_analyze, "run structural checks", clone_budget=True)
    q.add_argument("--checks", default=DEFAULT_CHECKS, help=f"comma list from {','.join(CHECKS)}")
    q.add_argument("--arity", type=_int_csv, default=[1], help="arities for opc-brute and ip")
    q.add_argument("--max-functions", type=int, default=DEFAULT_MAX_FUNCTIONS)
    q = add("clone", cmd_clone, "materialise the polynomial clone", clone_budget=True)
    q.add_argument("--arity", type=int, required=True)
    q.add_argument("--restrict", help="points-v1 file of tuples to restrict to")
    q.add_argument("--emit-term", action="store_true")
    q.add_argument("--summary", action="store_true", help="omit the member list")
    q = add("interpolate", cmd_interpolate, "find a polynomial agreeing with a function", fn_file=True,
            clone_budget=True)
    q.add_argument("--emit-term", action="store_true")
    add("extend", cmd_extend, "least monotone extension of a partial function", fn_file=True)
    add("antichain", cmd_antichain, "maximum antichain and minimum chain cover")
    add("chain", cmd_chain, "longest chain and height layers")
    q = add("ramsey", cmd_ramsey, "chain of length r or antichain of size s")
    q.add_argument("-r", type=int, required=True)
    q.add_argument("-s", type=int, required=True)
    q = add("count-monotone", cmd_count_monotone, "count monotone functions")
    q.add_argument("--arity", type=int, required=True)
    q.add_argument("--limit", "--max-functions", dest="limit", type=int, default=DEFAULT_MAX_FUNCTIONS)
    q = add("gallery", cmd_gallery, "write a named example lattice")
    q.add_argument("kind", choices=["mn", "example1", "example2", "example3", "boolean", "mo2", "mo3", "random"])
    q.add_argument("--atoms", type=int, default=3)
    q.add_argument("--blocks", type=_int_csv)
    q.add_argument("--size", type=int, default=6)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--max-tuples", type=int, default=DEFAULT_MAX_TUPLES)
    q.add_argument("-o", "--output")
    add("ortho-check", cmd_ortho_check, "validate the orthocomplement of a lattice file")
    add("ortho-factor", cmd_ortho_factor, "factor a unary map through monotone maps and perp", fn_file=True)
    q = add("amplify", cmd_amplify, "incomparable polynomials from an antichain", clone_budget=True)
    q.add_argument("--antichain", type=_int_csv, required=True)
    q.add_argument("--emit-term", action="store_true")
    return p


def _error_report(kind: str, e: Exception) -> dict:
    doc = {"format": "error-report-v1", "error": kind, "type": type(e).__name__, "message": str(e)}
    if isinstance(e, ValidationError) and e.details:
        doc["details"] = e.details
    if isinstance(e, BudgetExceeded):
        doc["limit"] = e.limit
        doc["partial"] = e.partial
    return doc


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:  # argparse prints its own usage message
        return EXIT_OK if e.code == 0 else EXIT_IO
    try:
        rep = args.handler(args)
    except BudgetExceeded as e:
        code, kind, err = EXIT_BUDGET, "budget", e
    except (ValidationError, ValueError) as e:
        code, kind, err = EXIT_VALIDATION, "validation", e
    except (io.FormatError, OSError) as e:
        code, kind, err = EXIT_IO, "io", e
    except LatticeLabError as e:  # pragma: no cover - every subclass is handled above
        code, kind, err = EXIT_VALIDATION, "validation", e
    else:
        _emit(rep, stdout)
        return EXIT_OK
    stderr.write(f"latticelab {args.command}: {err}\n")
    _emit(_error_report(kind, err), stdout)
    return code


def main() -> None:
    sys.exit(run())
