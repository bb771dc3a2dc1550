"""Polynomial and sigma-polynomial terms.

Text form is an s-expression::

    x1            variable (1-based)
    c3            lattice constant (element id)
    (join e1 e2 ...)   (meet e1 e2 ...)   at least two operands
    (sup e ...)   (inf e ...)             finite families of any size
    (perp e)                              orthocomplement
    #2            coefficient slot in a skeleton template

``format_term(parse_term(s)) == s`` for every canonically spaced ``s``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import ArityMismatch, PerpUnavailable


@dataclass(frozen=True)
class Var:
    index: int  # 1-based


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Slot:
    index: int  # 1-based coefficient position


@dataclass(frozen=True)
class JoinOf:
    args: tuple

    def __post_init__(self):
        if len(self.args) < 2:
            raise ValueError("join needs at least two operands")


@dataclass(frozen=True)
class MeetOf:
    args: tuple

    def __post_init__(self):
        if len(self.args) < 2:
            raise ValueError("meet needs at least two operands")


@dataclass(frozen=True)
class SupOf:
    args: tuple


@dataclass(frozen=True)
class InfOf:
    args: tuple


@dataclass(frozen=True)
class Perp:
    arg: "Term"


Term = Union[Var, Const, Slot, JoinOf, MeetOf, SupOf, InfOf, Perp]

_NARY = {JoinOf: "join", MeetOf: "meet", SupOf: "sup", InfOf: "inf"}
_BY_NAME = {v: k for k, v in _NARY.items()}


def join(*args) -> JoinOf:
    return JoinOf(tuple(args))


def meet(*args) -> MeetOf:
    return MeetOf(tuple(args))


# --- text form ------------------------------------------------------------

def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return f"x{t.index}"
    if isinstance(t, Const):
        return f"c{t.value}"
    if isinstance(t, Slot):
        return f"#{t.index}"
    if isinstance(t, Perp):
        return f"(perp {format_term(t.arg)})"
    name = _NARY[type(t)]
    if not t.args:
        return f"({name})"
    return f"({name} " + " ".join(format_term(a) for a in t.args) + ")"


_TOKEN = re.compile(r"\s*(\(|\)|[^\s()]+)")
_ATOM = re.compile(r"(x|c|#)(\d+)$")


def parse_term(text: str) -> Term:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot tokenize term at offset {pos}")
        tokens.append(m.group(1))
        pos = m.end()
    term, i = _parse(tokens, 0)
    if i != len(tokens):
        raise ValueError("trailing tokens after term")
    return term


def _parse(tokens: list[str], i: int):
    if i >= len(tokens):
        raise ValueError("unexpected end of term")
    tok = tokens[i]
    if tok == "(":
        if i + 1 >= len(tokens):
            raise ValueError("unexpected end of term")
        head = tokens[i + 1]
        i += 2
        args = []
        while i < len(tokens) and tokens[i] != ")":
            a, i = _parse(tokens, i)
            args.append(a)
        if i >= len(tokens):
            raise ValueError("unbalanced parentheses")
        i += 1
        if head == "perp":
            if len(args) != 1:
                raise ValueError("perp takes exactly one operand")
            return Perp(args[0]), i
        if head not in _BY_NAME:
            raise ValueError(f"unknown operator {head!r}")
        return _BY_NAME[head](tuple(args)), i
    if tok == ")":
        raise ValueError("unexpected ')'")
    m = _ATOM.match(tok)
    if not m:
        raise ValueError(f"bad atom {tok!r}")
    kind, num = m.group(1), int(m.group(2))
    if kind == "x":
        if num < 1:
            raise ValueError("variables are numbered from 1")
        return Var(num), i + 1
    if kind == "#":
        return Slot(num), i + 1
    return Const(num), i + 1


# --- structure ------------------------------------------------------------

def children(t: Term) -> tuple:
    if isinstance(t, Perp):
        return (t.arg,)
    if isinstance(t, (JoinOf, MeetOf, SupOf, InfOf)):
        return t.args
    return ()


def max_var(t: Term) -> int:
    if isinstance(t, Var):
        return t.index
    return max((max_var(c) for c in children(t)), default=0)


def uses_perp(t: Term) -> bool:
    return isinstance(t, Perp) or any(uses_perp(c) for c in children(t))


def term_size(t: Term) -> int:
    return 1 + sum(term_size(c) for c in children(t))


# --- evaluation -----------------------------------------------------------

def _ops(algebra):
    """``(lattice, perp-table or None)`` for a Lattice or OrthoLattice."""
    lattice = getattr(algebra, "lattice", algebra)
    return lattice, getattr(algebra, "perp", None)


def evaluate(t: Term, algebra, point: Sequence[int]) -> int:
    """Value of ``t`` at ``point``; empty sup is bottom, empty inf is top."""
    got = evaluate_many(t, algebra, np.asarray([point], dtype=np.intp).reshape(1, -1))
    return int(got[0])


def evaluate_many(t: Term, algebra, points: np.ndarray, coefficients: Sequence[int] = ()) -> np.ndarray:
    """Vectorised evaluation over the rows of ``points`` (shape ``(m, k)``)."""
    L, perp = _ops(algebra)
    points = np.asarray(points, dtype=np.intp)
    if points.ndim != 2:
        raise ArityMismatch("points must be a 2-d array")
    k = points.shape[1]
    m = points.shape[0]

    def go(u):
        if isinstance(u, Var):
            if u.index > k:
                raise ArityMismatch(f"variable x{u.index} but point arity is {k}")
            return points[:, u.index - 1]
        if isinstance(u, Const):
            if not 0 <= u.value < L.n:
                raise ValueError(f"constant c{u.value} is not an element")
            return np.full(m, u.value, dtype=np.intp)
        if isinstance(u, Slot):
            if u.index > len(coefficients):
                raise ValueError(f"no coefficient for slot #{u.index}")
            return np.full(m, coefficients[u.index - 1], dtype=np.intp)
        if isinstance(u, Perp):
            if perp is None:
                raise PerpUnavailable("perp used on a lattice without orthocomplement")
            return perp[go(u.arg)]
        if isinstance(u, (JoinOf, SupOf)):
            acc = np.full(m, L.bottom, dtype=np.intp)
            for a in u.args:
                acc = L.join[acc, go(a)]
            return acc
        if isinstance(u, (MeetOf, InfOf)):
            acc = np.full(m, L.top, dtype=np.intp)
            for a in u.args:
                acc = L.meet[acc, go(a)]
            return acc
        raise TypeError(f"not a term: {u!r}")

    return go(t)


def term_table(t: Term, algebra, arity: int, rows=None):
    """The induced function as a :class:`FunctionTable` (partial if ``rows`` given)."""
    from .order import UNDEFINED, FunctionTable

    L, _ = _ops(algebra)
    if max_var(t) > arity:
        raise ArityMismatch(f"term uses x{max_var(t)} but arity is {arity}")
    pts = L.tuples(arity)
    if rows is None:
        return FunctionTable(L, arity, evaluate_many(t, algebra, pts))
    rows = np.asarray(rows, dtype=np.intp)
    values = np.full(L.n**arity, UNDEFINED, dtype=np.intp)
    values[rows] = evaluate_many(t, algebra, pts[rows])
    return FunctionTable(L, arity, values)


# --- skeletons ------------------------------------------------------------

@dataclass(frozen=True)
class Skeleton:
    template: Term
    coefficients: tuple[int, ...]

    def fill(self, coefficients: Sequence[int] | None = None) -> Term:
        return substitute(self.template, self.coefficients if coefficients is None else coefficients)


def skeletonize(t: Term) -> Skeleton:
    """Replace constants by slots ``#1..#m`` in left-to-right order."""
    coeffs: list[int] = []

    def go(u):
        if isinstance(u, Const):
            coeffs.append(u.value)
            return Slot(len(coeffs))
        if isinstance(u, Perp):
            return Perp(go(u.arg))
        if isinstance(u, (JoinOf, MeetOf, SupOf, InfOf)):
            return type(u)(tuple(go(a) for a in u.args))
        return u

    template = go(t)
    return Skeleton(template, tuple(coeffs))


def substitute(template: Term, coefficients: Sequence[int]) -> Term:
    def go(u):
        if isinstance(u, Slot):
            return Const(int(coefficients[u.index - 1]))
        if isinstance(u, Perp):
            return Perp(go(u.arg))
        if isinstance(u, (JoinOf, MeetOf, SupOf, InfOf)):
            return type(u)(tuple(go(a) for a in u.args))
        return u

    return go(template)
