"""JSON file formats: lattices (``lattice-v1``), functions (``fn-v1``), point sets (``points-v1``)."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import LatticeLabError
from .lattice import Lattice, encode, lattice_from_covers
from .order import UNDEFINED, FunctionTable
from .ortho import OrthoLattice, validate_ortho

LATTICE_FORMAT = "lattice-v1"
FUNCTION_FORMAT = "fn-v1"
POINTS_FORMAT = "points-v1"


class FormatError(LatticeLabError):
    """Malformed or unreadable file (CLI exit code 3)."""


def _load(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e.strerror or e}") from e
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from e
    if not isinstance(doc, dict):
        raise FormatError(f"{path}: top level must be an object")
    return doc


def _expect(doc: dict, key: str, kind, where: str):
    if key not in doc:
        raise FormatError(f"{where}: missing field {key!r}")
    v = doc[key]
    if not isinstance(v, kind) or isinstance(v, bool):
        raise FormatError(f"{where}: field {key!r} has the wrong type")
    return v


def _int_list(v, where: str) -> list[int]:
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise FormatError(f"{where}: expected a list of integers")
    return v


def dumps(doc: dict) -> str:
    """Compact, key-order preserving JSON with a trailing newline."""
    return json.dumps(doc, separators=(",", ":")) + "\n"


# --- lattices -------------------------------------------------------------

def lattice_from_dict(doc: dict, where: str = "lattice") -> Lattice | OrthoLattice:
    if doc.get("format") != LATTICE_FORMAT:
        raise FormatError(f"{where}: format must be {LATTICE_FORMAT!r}")
    n = _expect(doc, "n", int, where)
    if n < 1:
        raise FormatError(f"{where}: n must be positive")
    covers = _expect(doc, "covers", list, where)
    pairs = []
    for c in covers:
        c = _int_list(c, where)
        if len(c) != 2 or not all(0 <= x < n for x in c):
            raise FormatError(f"{where}: cover {c} is not a pair of element ids")
        pairs.append((c[0], c[1]))
    L = lattice_from_covers(n, pairs)
    if "perp" in doc:
        perp = _int_list(doc["perp"], where)
        if len(perp) != n or not all(0 <= x < n for x in perp):
            raise FormatError(f"{where}: perp must list n element ids")
        return validate_ortho(L, perp)
    return L


def lattice_to_dict(algebra: Lattice | OrthoLattice) -> dict:
    L = getattr(algebra, "lattice", algebra)
    doc = {"format": LATTICE_FORMAT, "n": L.n, "covers": [list(c) for c in sorted(L.poset.covers())]}
    perp = getattr(algebra, "perp", None)
    if perp is not None:
        doc["perp"] = [int(v) for v in perp]
    return doc


def read_lattice(path) -> Lattice | OrthoLattice:
    return lattice_from_dict(_load(path), where=str(path))


def write_lattice(algebra, path) -> None:
    Path(path).write_text(dumps(lattice_to_dict(algebra)), encoding="utf-8")


# --- functions ------------------------------------------------------------

def function_from_dict(doc: dict, L: Lattice, where: str = "function") -> FunctionTable:
    if doc.get("format") != FUNCTION_FORMAT:
        raise FormatError(f"{where}: format must be {FUNCTION_FORMAT!r}")
    k = _expect(doc, "arity", int, where)
    if k < 0:
        raise FormatError(f"{where}: arity must be nonnegative")
    if ("table" in doc) == ("points" in doc):
        raise FormatError(f"{where}: give exactly one of 'table' or 'points'")
    if "table" in doc:
        table = _int_list(doc["table"], where)
        if len(table) != L.n**k or not all(0 <= v < L.n for v in table):
            raise FormatError(f"{where}: table must list n^arity element ids")
        return FunctionTable(L, k, table)
    values = np.full(L.n**k, UNDEFINED, dtype=np.intp)
    for item in _expect(doc, "points", list, where):
        if not isinstance(item, list) or len(item) != 2:
            raise FormatError(f"{where}: each point entry is [[a1..ak], v]")
        pt = _int_list(item[0], where)
        v = item[1]
        if len(pt) != k or not all(0 <= a < L.n for a in pt):
            raise FormatError(f"{where}: point {pt} is out of range")
        if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < L.n:
            raise FormatError(f"{where}: value at {pt} is not an element id")
        idx = encode(pt, L.n)
        if values[idx] not in (UNDEFINED, v):
            raise FormatError(f"{where}: conflicting values at point {pt}")
        values[idx] = v
    return FunctionTable(L, k, values)


def function_to_dict(f: FunctionTable) -> dict:
    doc = {"format": FUNCTION_FORMAT, "arity": f.arity}
    if f.is_total:
        doc["table"] = [int(v) for v in f.values]
    else:
        doc["points"] = [[list(p), v] for p, v in f.points()]
    return doc


def read_function(path, L: Lattice) -> FunctionTable:
    return function_from_dict(_load(path), L, where=str(path))


def write_function(f: FunctionTable, path) -> None:
    Path(path).write_text(dumps(function_to_dict(f)), encoding="utf-8")


# --- point sets -----------------------------------------------------------

def read_points(path, L: Lattice, arity: int) -> list[int]:
    """Tuple indices listed in a ``points-v1`` file, sorted and deduplicated."""
    doc = _load(path)
    where = str(path)
    if doc.get("format") != POINTS_FORMAT:
        raise FormatError(f"{where}: format must be {POINTS_FORMAT!r}")
    if _expect(doc, "arity", int, where) != arity:
        raise FormatError(f"{where}: arity does not match --arity")
    out = set()
    for pt in _expect(doc, "points", list, where):
        pt = _int_list(pt, where)
        if len(pt) != arity or not all(0 <= a < L.n for a in pt):
            raise FormatError(f"{where}: point {pt} is out of range")
        out.add(encode(pt, L.n))
    return sorted(out)


def points_to_dict(arity: int, points) -> dict:
    return {"format": POINTS_FORMAT, "arity": arity, "points": [list(p) for p in points]}
