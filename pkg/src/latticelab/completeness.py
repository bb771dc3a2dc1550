"""Congruences, Wille's property and order-polynomial completeness decisions."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import BudgetExceeded, TrivialLattice
from .lattice import Lattice
from .order import (
    DEFAULT_MAX_FUNCTIONS,
    FunctionTable,
    _monotone_backtrack,
    heights,
    sperner_family,
)
from .polynomials import DEFAULT_MAX_CLONE, Clone, ThinningReport, polynomial_clone, thinning_check
from .terms import Const, JoinOf, MeetOf, Term, Var, evaluate_many, format_term, skeletonize


# --- congruences ----------------------------------------------------------

@dataclass(frozen=True)
class Partition:
    """Block id per element, numbered in order of first occurrence."""

    labels: tuple[int, ...]

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "Partition":
        seen: dict[int, int] = {}
        return cls(tuple(seen.setdefault(int(x), len(seen)) for x in labels))

    @property
    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(max(self.labels, default=-1) + 1)]
        for x, b in enumerate(self.labels):
            out[b].append(x)
        return out

    @property
    def is_identity(self) -> bool:
        return len(set(self.labels)) == len(self.labels)

    @property
    def is_full(self) -> bool:
        return len(set(self.labels)) <= 1

    def same(self, a: int, b: int) -> bool:
        return self.labels[a] == self.labels[b]


def is_congruence(L: Lattice, p: Partition) -> bool:
    lab = np.asarray(p.labels)
    same = lab[:, None] == lab[None, :]
    a, b = np.nonzero(same)
    # a ~ b must imply a op c ~ b op c for every c
    for table in (L.meet, L.join):
        if not (lab[table[a]] == lab[table[b]]).all():
            return False
    return True


def congruence_generated(L: Lattice, pairs: Iterable[Sequence[int]]) -> Partition:
    """Least congruence containing ``pairs``."""
    parent = list(range(L.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        if ra > rb:
            ra, rb = rb, ra
        parent[rb] = ra
        return True

    for a, b in pairs:
        union(int(a), int(b))
    meet, join = L.meet.tolist(), L.join.tolist()
    changed = True
    while changed:
        changed = False
        reps = [find(x) for x in range(L.n)]
        for x, r in enumerate(reps):
            if r == x:
                continue
            mx, mr, jx, jr = meet[x], meet[r], join[x], join[r]
            for c in range(L.n):
                changed |= union(mx[c], mr[c])
                changed |= union(jx[c], jr[c])
    return Partition.from_labels([find(x) for x in range(L.n)])


def is_simple(L: Lattice) -> tuple[bool, tuple | None]:
    """``(True, None)`` or ``(False, ((a, b), proper congruence))``."""
    if L.n < 2:
        raise TrivialLattice("simplicity needs at least two elements")
    for a in range(L.n):
        for b in range(a + 1, L.n):
            theta = congruence_generated(L, [(a, b)])
            if not theta.is_full:
                return False, ((a, b), theta)
    return True, None


# --- Wille's property ------------------------------------------------------

def regressive_join_endomorphisms(L: Lattice) -> Iterator[np.ndarray]:
    """All ``f`` with ``f(x) <= x`` and ``f(a v b) = f(a) v f(b)``.

    Elements are assigned in a linear extension with the smallest admissible
    value first; every pair joining to ``x`` is checked as soon as ``x`` is set.
    """
    n = L.n
    h = heights(L.poset)
    order = sorted(range(n), key=lambda x: (h[x], x))
    join = L.join
    pairs_to = [[] for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            pairs_to[int(join[a, b])].append((a, b))
    below = [np.flatnonzero(L.leq[:, x]).tolist() for x in range(n)]
    f = [-1] * n

    def ok(x):
        return all(f[x] == join[f[a], f[b]] for a, b in pairs_to[x])

    def rec(step):
        if step == n:
            yield np.array(f, dtype=np.intp)
            return
        x = order[step]
        for y in below[x]:
            f[x] = y
            if ok(x):
                yield from rec(step + 1)
        f[x] = -1

    yield from rec(0)


def wille_property(L: Lattice) -> tuple[bool, np.ndarray | None]:
    """Only identity and constant-bottom are regressive join-endomorphisms."""
    ident = np.arange(L.n)
    for f in regressive_join_endomorphisms(L):
        if np.array_equal(f, ident) or (f == L.bottom).all():
            continue
        return False, f
    return True, None


# --- o.p.c. decisions -----------------------------------------------------

@dataclass
class OpcOutcome:
    """Result of a brute-force k-o.p.c. decision.

    ``method`` is ``"exhaustive"`` (full clone against full enumeration) or
    ``"lifted"`` (unary decision plus the principal-filter certificate).
    """

    arity: int
    all_polynomial: bool
    method: str
    witness: FunctionTable | None = None
    clone_size: int | None = None
    monotone_count: int | None = None
    certificate_checks: int = 0

    @property
    def status(self) -> str:
        return "all-polynomial" if self.all_polynomial else "witness"


@dataclass
class OpcReport:
    simple: bool
    simple_witness: tuple | None
    wille: bool
    wille_witness: np.ndarray | None
    brute_results: dict = field(default_factory=dict)

    @property
    def verdict(self) -> bool:
        return self.simple and self.wille


def opc_wille(L: Lattice, arities: Sequence[int] = (), **budget) -> OpcReport:
    """Simplicity and Wille's property; ``arities`` also records brute-force outcomes."""
    simple, sw = is_simple(L)
    wille, ww = wille_property(L)
    brute = {k: opc_bruteforce(L, k, **budget) for k in arities}
    return OpcReport(simple, sw, wille, ww, brute)


def _exhaustive(L: Lattice, k: int, max_clone: int, max_functions: int, clone: Clone | None = None) -> OpcOutcome:
    if clone is None:
        clone = polynomial_clone(L, k, max_size=max_clone)
    count = 0
    for vals in _monotone_backtrack(L, k):
        count += 1
        if count > max_functions:
            raise BudgetExceeded(
                f"more than {max_functions} monotone functions", limit=max_functions,
                partial={"checked": count - 1, "clone_size": len(clone)},
            )
        if clone.find(vals) is None:
            return OpcOutcome(k, False, "exhaustive", FunctionTable(L, k, vals.copy()), len(clone), count)
    if count != len(clone):  # pragma: no cover - clone members are monotone
        raise AssertionError("clone contains a non-monotone member")
    return OpcOutcome(k, True, "exhaustive", None, len(clone), count)


def filter_indicator(L: Lattice, c: int) -> FunctionTable:
    """Unary ``x -> top if x >= c else bottom``."""
    return FunctionTable(L, 1, np.where(L.leq[c], L.top, L.bottom))


def _rename(t: Term, var: int) -> Term:
    if isinstance(t, Var):
        return Var(var)
    if isinstance(t, JoinOf):
        return JoinOf(tuple(_rename(a, var) for a in t.args))
    if isinstance(t, MeetOf):
        return MeetOf(tuple(_rename(a, var) for a in t.args))
    return t


def filter_terms(L: Lattice, unary: Clone) -> list[Term] | None:
    """Unary polynomials for every filter indicator, or ``None`` if one is missing."""
    out = []
    for c in range(L.n):
        i = unary.find_function(filter_indicator(L, c))
        if i is None:
            return None
        out.append(unary.term(i))
    return out


def represent(L: Lattice, f: FunctionTable, filters: Sequence[Term]) -> Term:
    """Polynomial for monotone ``f``: join over points ``a`` of ``f(a) & [x >= a]``."""
    pts = L.tuples(f.arity).tolist()
    parts = []
    for a, v in zip(pts, f.values.tolist()):
        if v == L.bottom:
            continue
        factors = [_rename(filters[c], i + 1) for i, c in enumerate(a)] + [Const(v)]
        parts.append(MeetOf(tuple(factors)))
    if not parts:
        return Const(L.bottom)
    return parts[0] if len(parts) == 1 else JoinOf(tuple(parts))


def _lifted(L: Lattice, k: int, max_clone: int, max_functions: int, samples: int = 25) -> OpcOutcome:
    unary = polynomial_clone(L, 1, max_size=max_clone)
    base = _exhaustive(L, 1, max_clone, max_functions, clone=unary)
    tuples = L.tuples(k)
    if not base.all_polynomial:
        # f(x1) is not a k-ary polynomial: substituting constants would make f unary-polynomial
        lifted = FunctionTable(L, k, base.witness.values[tuples[:, 0]])
        return OpcOutcome(k, False, "lifted", lifted, None, None)
    filters = filter_terms(L, unary)
    if filters is None:  # pragma: no cover - unary completeness includes the indicators
        raise AssertionError("unary clone is complete but lacks a filter indicator")
    checks = 0
    up = L.tuple_leq(k)
    for a in range(len(tuples)):
        term = MeetOf(tuple(_rename(filters[c], i + 1) for i, c in enumerate(tuples[a].tolist())))
        got = evaluate_many(term, L, tuples)
        if not np.array_equal(got, np.where(up[a], L.top, L.bottom)):  # pragma: no cover
            raise AssertionError(f"filter certificate fails at tuple {a}")
        checks += 1
    for s, vals in enumerate(_monotone_backtrack(L, k)):
        if s >= samples:
            break
        f = FunctionTable(L, k, vals.copy())
        if not np.array_equal(evaluate_many(represent(L, f, filters), L, tuples), f.values):  # pragma: no cover
            raise AssertionError("representation certificate fails")
        checks += 1
    return OpcOutcome(k, True, "lifted", None, None, None, certificate_checks=checks)


def opc_bruteforce(L: Lattice, k: int, max_clone: int = DEFAULT_MAX_CLONE,
                   max_functions: int = DEFAULT_MAX_FUNCTIONS, method: str = "auto") -> OpcOutcome:
    """Decide whether every monotone ``L^k -> L`` is a polynomial function.

    ``"exhaustive"`` materialises the k-ary clone and checks every monotone
    function in canonical order.  ``"lifted"`` decides the unary case that way
    and transfers it: a monotone ``f`` equals the join over ``a`` of
    ``f(a) & [x >= a]``, and ``[x >= a]`` is the meet of unary filter
    indicators, so arity ``k`` is complete iff arity 1 is.  ``"auto"`` tries
    the exhaustive route and lifts when it runs out of budget at ``k >= 2``.
    """
    if method == "exhaustive" or (method == "auto" and k == 1):
        return _exhaustive(L, k, max_clone, max_functions)
    if method == "lifted":
        return _lifted(L, k, max_clone, max_functions)
    try:
        return _exhaustive(L, k, max_clone, max_functions)
    except BudgetExceeded:
        return _lifted(L, k, max_clone, max_functions)


def has_ip(L: Lattice, k: int, **budget) -> tuple[bool, tuple | None]:
    """Finite interpolation property at arity ``k``; failure witness is ``(f, A)``.

    On a finite lattice ``A = L^k`` already covers every finite subset.
    """
    out = opc_bruteforce(L, k, **budget)
    if out.all_polynomial:
        return True, None
    return False, (out.witness, np.arange(L.n**k))


# --- amplification --------------------------------------------------------

@dataclass
class AmplificationOutcome:
    family: list[FunctionTable]
    witness: FunctionTable | None = None
    terms: list[Term] = field(default_factory=list)
    group: list[int] = field(default_factory=list)
    thinning: ThinningReport | None = None

    @property
    def polynomial(self) -> bool:
        return self.witness is None

    @property
    def antichain(self) -> list[tuple[int, ...]]:
        return [] if self.thinning is None else self.thinning.coefficients

    @property
    def slots(self) -> int:
        return 0 if self.thinning is None else self.thinning.slots


def antichain_amplification(L: Lattice, A: Iterable[int], max_size: int = DEFAULT_MAX_CLONE) -> AmplificationOutcome:
    """Incomparable indicators on ``A`` -> polynomials -> coefficient antichain."""
    family = sperner_family(L, A)
    clone = polynomial_clone(L, 1, max_size=max_size)
    terms = []
    for f in family:
        i = clone.find_function(f)
        if i is None:
            return AmplificationOutcome(family, witness=f)
        terms.append(clone.term(i))
    groups: dict[str, list[int]] = {}
    for i, t in enumerate(terms):
        groups.setdefault(format_term(skeletonize(t).template), []).append(i)
    # dicts keep first-insertion order; max() keeps the first of equal sizes
    best = max(groups.values(), key=len)
    report = thinning_check([terms[i] for i in best], L, arity=1)
    return AmplificationOutcome(family, None, terms, best, report)
