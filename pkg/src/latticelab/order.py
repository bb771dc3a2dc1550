"""Chains, antichains and monotone function tables.

A :class:`FunctionTable` is a (possibly partial) map ``L^k -> L`` stored as a
dense vector over :func:`latticelab.lattice.encode`-indexed tuples, with ``-1``
marking points outside the domain.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ArityMismatch, BudgetExceeded, NotAnAntichain, NotMonotoneOnDomain, TooSmall
from .lattice import Lattice, Poset, decode, encode

DEFAULT_MAX_FUNCTIONS = 10**6
UNDEFINED = -1


@dataclass(frozen=True, eq=False)
class FunctionTable:
    lattice: Lattice
    arity: int
    values: np.ndarray

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=np.intp)
        if v.shape != (self.lattice.n**self.arity,):
            raise ArityMismatch(f"table needs {self.lattice.n ** self.arity} entries, got {v.shape}")
        if ((v < UNDEFINED) | (v >= self.lattice.n)).any():
            raise ValueError("function value out of range")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def total(cls, L: Lattice, arity: int, values) -> "FunctionTable":
        ft = cls(L, arity, values)
        if not ft.is_total:
            raise ValueError("total table has undefined entries")
        return ft

    @classmethod
    def from_points(cls, L: Lattice, arity: int, points) -> "FunctionTable":
        """Partial table from ``{point_tuple: value}`` or ``[(point, value), ...]``."""
        items = points.items() if isinstance(points, dict) else points
        values = np.full(L.n**arity, UNDEFINED, dtype=np.intp)
        for pt, v in items:
            pt = tuple(pt)
            if len(pt) != arity:
                raise ArityMismatch(f"point {pt} does not have arity {arity}")
            idx = encode(pt, L.n)
            if values[idx] != UNDEFINED and values[idx] != v:
                raise ValueError(f"conflicting values at point {pt}")
            values[idx] = v
        return cls(L, arity, values)

    @classmethod
    def from_callable(cls, L: Lattice, arity: int, fn) -> "FunctionTable":
        t = L.tuples(arity)
        return cls(L, arity, [fn(*row) for row in t.tolist()])

    @property
    def domain(self) -> np.ndarray:
        return np.flatnonzero(self.values != UNDEFINED)

    @property
    def is_total(self) -> bool:
        return bool((self.values != UNDEFINED).all())

    def __call__(self, *point) -> int:
        v = int(self.values[encode(point, self.lattice.n)])
        if v == UNDEFINED:
            raise KeyError(point)
        return v

    def __eq__(self, other):
        return (
            isinstance(other, FunctionTable)
            and self.arity == other.arity
            and self.lattice == other.lattice
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.arity, self.values.tobytes()))

    def __repr__(self):
        return f"FunctionTable(arity={self.arity}, values={self.values.tolist()})"

    def points(self) -> list[tuple[tuple[int, ...], int]]:
        n = self.lattice.n
        return [(decode(int(i), n, self.arity), int(self.values[i])) for i in self.domain]

    def restrict(self, indices) -> "FunctionTable":
        values = np.full_like(self.values, UNDEFINED)
        idx = np.asarray(indices, dtype=np.intp)
        values[idx] = self.values[idx]
        return FunctionTable(self.lattice, self.arity, values)


@dataclass(frozen=True)
class ChainAntichainWitness:
    kind: str  # "chain" | "antichain" | "dual-chain"
    elements: tuple[int, ...] = field(default_factory=tuple)


# --- width and height ------------------------------------------------------

def _strict(P: Poset) -> np.ndarray:
    return P.leq & ~np.eye(P.n, dtype=bool)


def _max_matching(adj: list[list[int]], n_right: int) -> tuple[list[int], list[int]]:
    """Kuhn's augmenting paths, left vertices and neighbours scanned by ascending id."""
    match_left = [-1] * len(adj)
    match_right = [-1] * n_right

    def augment(u, seen):
        for v in adj[u]:
            if seen[v]:
                continue
            seen[v] = True
            if match_right[v] < 0 or augment(match_right[v], seen):
                match_left[u] = v
                match_right[v] = u
                return True
        return False

    for u in range(len(adj)):
        augment(u, [False] * n_right)
    return match_left, match_right


def min_chain_cover(P: Poset) -> list[list[int]]:
    """Minimum partition of ``P`` into chains (Dilworth), chains listed ascending."""
    if isinstance(P, Lattice):
        P = P.poset
    lt = _strict(P)
    adj = [np.flatnonzero(lt[u]).tolist() for u in range(P.n)]
    match_left, match_right = _max_matching(adj, P.n)
    chains = []
    for start in range(P.n):
        if match_right[start] >= 0:
            continue
        c = [start]
        while match_left[c[-1]] >= 0:
            c.append(match_left[c[-1]])
        chains.append(c)
    return chains


def max_antichain(P: Poset) -> list[int]:
    """A maximum antichain, read off a minimum vertex cover of the comparability matching.

    König: with ``Z`` the vertices reachable from unmatched left vertices by
    alternating paths, the cover is ``(left - Z) + (right & Z)``; the elements
    outside the cover on both sides form an antichain of size ``n - |matching|``.
    """
    if isinstance(P, Lattice):
        P = P.poset
    lt = _strict(P)
    n = P.n
    adj = [np.flatnonzero(lt[u]).tolist() for u in range(n)]
    match_left, match_right = _max_matching(adj, n)
    zl = [False] * n
    zr = [False] * n
    stack = [u for u in range(n) if match_left[u] < 0]
    for u in stack:
        zl[u] = True
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if not zr[v] and match_left[u] != v:
                zr[v] = True
                w = match_right[v]
                if w >= 0 and not zl[w]:
                    zl[w] = True
                    stack.append(w)
    return [x for x in range(n) if zl[x] and not zr[x]]


def heights(P: Poset) -> np.ndarray:
    """Length of the longest chain ending at each element (minimal elements: 1)."""
    if isinstance(P, Lattice):
        P = P.poset
    lt = _strict(P)
    h = np.zeros(P.n, dtype=np.intp)
    # process by number of strict predecessors: a valid topological order
    for x in np.argsort(lt.sum(axis=0), kind="stable"):
        preds = np.flatnonzero(lt[:, x])
        h[x] = 1 + (h[preds].max() if len(preds) else 0)
    return h


def mirsky_layers(P: Poset) -> list[list[int]]:
    """Antichain partition by height; the number of layers is the height of ``P``."""
    h = heights(P)
    return [np.flatnonzero(h == level).tolist() for level in range(1, int(h.max(initial=0)) + 1)]


def longest_chain(P: Poset) -> list[int]:
    if isinstance(P, Lattice):
        P = P.poset
    if P.n == 0:
        return []
    h = heights(P)
    lt = _strict(P)
    x = int(np.flatnonzero(h == h.max())[0])
    out = [x]
    while h[x] > 1:
        x = int(np.flatnonzero(lt[:, x] & (h == h[x] - 1))[0])
        out.append(x)
    return out[::-1]


def ramsey_witness(P: Poset, r: int, s: int, dual: bool = False) -> ChainAntichainWitness:
    """A chain of length >= r or an antichain of size >= s.

    With ``dual=True`` the search runs on the reversed order and a chain found
    there is reported as ``"dual-chain"``, listed descending in ``P``.
    """
    if isinstance(P, Lattice):
        P = P.poset
    if dual:
        w = ramsey_witness(Poset(P.n, P.leq.T), r, s)
        return ChainAntichainWitness("dual-chain" if w.kind == "chain" else w.kind, w.elements)
    need = (r - 1) * (s - 1) + 1
    if P.n < need:
        raise TooSmall(f"need at least (r-1)(s-1)+1 = {need} elements, got {P.n}", required=need)
    c = longest_chain(P)
    if len(c) >= r:
        return ChainAntichainWitness("chain", tuple(c[:r]))
    layers = mirsky_layers(P)
    widest = max(layers, key=len)
    if len(widest) < s:  # pragma: no cover - pigeonhole makes this impossible
        raise AssertionError("pigeonhole violated")
    return ChainAntichainWitness("antichain", tuple(widest[:s]))


def is_antichain(P: Poset, S: Iterable[int]) -> bool:
    S = sorted(set(S))
    if isinstance(P, Lattice):
        P = P.poset
    sub = _strict(P)[np.ix_(S, S)]
    return not sub.any()


def is_chain(P: Poset, S: Sequence[int]) -> bool:
    if isinstance(P, Lattice):
        P = P.poset
    return all(P.lt(S[i], S[i + 1]) for i in range(len(S) - 1))


# --- function tables ------------------------------------------------------

def compare_functions(f: FunctionTable, g: FunctionTable) -> str:
    """Pointwise order: ``"less"``, ``"equal"``, ``"greater"`` or ``"incomparable"``."""
    if f.arity != g.arity or f.lattice.n != g.lattice.n:
        raise ArityMismatch("functions differ in arity or lattice")
    if not (f.is_total and g.is_total):
        raise ValueError("compare_functions needs total tables")
    leq = f.lattice.leq
    le = bool(leq[f.values, g.values].all())
    ge = bool(leq[g.values, f.values].all())
    if le and ge:
        return "equal"
    if le:
        return "less"
    if ge:
        return "greater"
    return "incomparable"


def check_monotone(f: FunctionTable) -> tuple[bool, tuple | None]:
    """``(True, None)`` or ``(False, (a, b))`` with ``a <= b`` but ``f(a) !<= f(b)``."""
    L = f.lattice
    dom = f.domain
    if len(dom) == 0:
        return True, None
    rel = L.tuple_leq(f.arity, dom, dom)
    vals = f.values[dom]
    bad = rel & ~L.leq[vals[:, None], vals[None, :]]
    if not bad.any():
        return True, None
    i, j = np.argwhere(bad)[0]
    return False, (decode(int(dom[i]), L.n, f.arity), decode(int(dom[j]), L.n, f.arity))


def linear_extension(L: Lattice, k: int) -> np.ndarray:
    """Tuples of ``L^k`` sorted by (sum of element heights, index)."""
    h = heights(L.poset)
    rank = h[L.tuples(k)].sum(axis=1) if k else np.zeros(1, dtype=np.intp)
    return np.lexsort((np.arange(len(rank)), rank))


def _lower_covers(L: Lattice, k: int) -> list[np.ndarray]:
    """For each tuple index, the tuples below it that differ in one coordinate by a cover."""
    n = L.n
    lower = [[] for _ in range(n)]
    for a, b in L.poset.covers():
        lower[b].append(a)
    t = L.tuples(k)
    weights = [n ** (k - 1 - i) for i in range(k)]
    out = []
    for idx, row in enumerate(t.tolist()):
        below = []
        for i, x in enumerate(row):
            for y in lower[x]:
                below.append(idx + (y - x) * weights[i])
        out.append(np.array(below, dtype=np.intp))
    return out


def _monotone_backtrack(L: Lattice, k: int) -> Iterator[np.ndarray]:
    """Yield (the same, mutated) value vector for each monotone ``L^k -> L``.

    Tuples are visited in :func:`linear_extension` order; at each tuple the value
    ranges over the up-set of the join of already-fixed lower covers, ascending.
    """
    n = L.n
    order = linear_extension(L, k).tolist()
    lower = _lower_covers(L, k)
    above = [np.flatnonzero(L.leq[x]).tolist() for x in range(n)]
    join = L.join
    vals = np.full(n**k, UNDEFINED, dtype=np.intp)
    m = len(order)
    choices: list[list[int]] = [[] for _ in range(m)]
    pos = [0] * m

    def options(step):
        lb = L.bottom
        for z in lower[order[step]]:
            lb = join[lb, vals[z]]
        return above[lb]

    step = 0
    choices[0] = options(0)
    pos[0] = 0
    while step >= 0:
        if pos[step] >= len(choices[step]):
            vals[order[step]] = UNDEFINED
            step -= 1
            if step >= 0:
                pos[step] += 1
            continue
        vals[order[step]] = choices[step][pos[step]]
        if step == m - 1:
            yield vals
            pos[step] += 1
            continue
        step += 1
        choices[step] = options(step)
        pos[step] = 0


def enumerate_monotone(L: Lattice, k: int, limit: int | None = None) -> Iterator[FunctionTable]:
    """All total monotone ``L^k -> L`` in canonical order, at most ``limit`` of them."""
    for i, vals in enumerate(_monotone_backtrack(L, k)):
        if limit is not None and i >= limit:
            return
        yield FunctionTable(L, k, vals.copy())


def count_monotone(L: Lattice, k: int, limit: int | None = DEFAULT_MAX_FUNCTIONS) -> int:
    """Exact count by the enumeration backtracking; raises past ``limit``."""
    count = 0
    for _ in _monotone_backtrack(L, k):
        count += 1
        if limit is not None and count > limit:
            raise BudgetExceeded(f"more than {limit} monotone functions", limit=limit, partial=count)
    return count


def extend_partial(f: FunctionTable) -> FunctionTable:
    """Least monotone total extension: ``x -> sup{f(z) : z in dom f, z <= x}``."""
    ok, pair = check_monotone(f)
    if not ok:
        raise NotMonotoneOnDomain(f"not monotone on its domain at {pair}", pair=pair)
    L = f.lattice
    dom = f.domain
    below = L.tuple_leq(f.arity, dom, None)  # below[d, x]: dom[d] <= x
    out = np.full(L.n**f.arity, L.bottom, dtype=np.intp)
    for i, v in enumerate(f.values[dom].tolist()):
        hit = below[i]
        out[hit] = L.join[out[hit], v]
    return FunctionTable(L, f.arity, out)


def sperner_family(L: Lattice, A: Iterable[int]) -> list[FunctionTable]:
    """Up-set indicators of the middle-layer subsets of the antichain ``A``.

    Subsets of size ``floor(|A|/2)`` are taken in ``itertools.combinations``
    order over sorted ``A``; no two of the resulting functions are comparable.
    """
    A = sorted(set(int(a) for a in A))
    if not is_antichain(L.poset, A):
        raise NotAnAntichain(f"{A} is not an antichain", elements=A)
    out = []
    for S in combinations(A, len(A) // 2):
        up = L.leq[list(S), :].any(axis=0) if S else np.zeros(L.n, dtype=bool)
        out.append(FunctionTable(L, 1, np.where(up, L.top, L.bottom)))
    return out
