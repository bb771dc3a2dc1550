"""Finite posets and bounded lattices.

Elements are the dense identifiers ``0..n-1``.  After construction the order is
held as a full boolean matrix and the lattice operations as ``n x n`` integer
tables, so every downstream kernel can use O(1) lookups and numpy fancy
indexing.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product as _iproduct
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BudgetExceeded,
    NotALattice,
    NotAnEmbedding,
    NotAPoset,
    NotBounded,
    NotDirected,
    NotSeparated,
)

DEFAULT_MAX_TUPLES = 10**6


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


# --- tuple encoding -------------------------------------------------------

def encode(point: Sequence[int], n: int) -> int:
    """Index of ``point`` in ``L^k``; the first coordinate is most significant."""
    idx = 0
    for a in point:
        idx = idx * n + int(a)
    return idx


def decode(index: int, n: int, k: int) -> tuple[int, ...]:
    out = []
    for _ in range(k):
        index, r = divmod(index, n)
        out.append(r)
    return tuple(reversed(out))


@lru_cache(maxsize=64)
def _tuple_array(n: int, k: int) -> np.ndarray:
    if k == 0:
        return _frozen(np.zeros((1, 0), dtype=np.intp))
    arr = np.array(list(_iproduct(range(n), repeat=k)), dtype=np.intp).reshape(-1, k)
    return _frozen(arr)


def tuple_array(n: int, k: int) -> np.ndarray:
    """All of ``L^k`` as an ``(n**k, k)`` array, row ``i`` being ``decode(i)``."""
    return _tuple_array(int(n), int(k))


# --- posets ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Poset:
    n: int
    leq: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "leq", _frozen(np.asarray(self.leq, dtype=bool)))

    def __eq__(self, other):
        return isinstance(other, Poset) and self.n == other.n and np.array_equal(self.leq, other.leq)

    def __hash__(self):
        return hash((self.n, self.leq.tobytes()))

    def lt(self, a: int, b: int) -> bool:
        return a != b and bool(self.leq[a, b])

    def comparable(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b] or self.leq[b, a])

    def covers(self) -> list[tuple[int, int]]:
        """Hasse diagram edges ``(lower, upper)`` in lexicographic order."""
        lt = self.leq & ~np.eye(self.n, dtype=bool)
        lti = lt.astype(np.int64)
        between = (lti @ lti) > 0
        cov = lt & ~between
        return [(int(a), int(b)) for a, b in zip(*np.nonzero(cov))]


def transitive_closure(n: int, pairs: Iterable[tuple[int, int]]) -> np.ndarray:
    """Reflexive-transitive closure of ``pairs`` as a dense boolean matrix."""
    rel = np.eye(n, dtype=bool)
    for a, b in pairs:
        if not (0 <= a < n and 0 <= b < n):
            raise NotAPoset(f"pair ({a}, {b}) out of range for n={n}", pair=(a, b))
        rel[a, b] = True
    for m in range(n):
        rel |= rel[:, m : m + 1] & rel[m : m + 1, :]
    return rel


def poset_from_leq(leq) -> Poset:
    leq = np.asarray(leq, dtype=bool)
    n = leq.shape[0]
    if leq.shape != (n, n):
        raise NotAPoset("order relation must be square")
    if not leq.diagonal().all():
        x = int(np.flatnonzero(~leq.diagonal())[0])
        raise NotAPoset(f"relation is not reflexive at {x}", element=x)
    sym = leq & leq.T & ~np.eye(n, dtype=bool)
    if sym.any():
        a, b = (int(v) for v in np.argwhere(sym)[0])
        raise NotAPoset(f"cycle: {a} <= {b} <= {a}", pair=(a, b))
    li = leq.astype(np.int64)
    trans = ((li @ li) > 0) & ~leq
    if trans.any():
        a, b = (int(v) for v in np.argwhere(trans)[0])
        raise NotAPoset(f"relation is not transitive: {a} <= ... <= {b} but not {a} <= {b}", pair=(a, b))
    return Poset(n, leq)


# --- lattices -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Lattice:
    poset: Poset
    meet: np.ndarray
    join: np.ndarray
    bottom: int
    top: int

    def __post_init__(self):
        object.__setattr__(self, "meet", _frozen(np.asarray(self.meet, dtype=np.intp)))
        object.__setattr__(self, "join", _frozen(np.asarray(self.join, dtype=np.intp)))

    @property
    def n(self) -> int:
        return self.poset.n

    @property
    def leq(self) -> np.ndarray:
        return self.poset.leq

    def __len__(self):
        return self.poset.n

    def __eq__(self, other):
        return (
            isinstance(other, Lattice)
            and self.poset == other.poset
            and np.array_equal(self.meet, other.meet)
            and np.array_equal(self.join, other.join)
            and (self.bottom, self.top) == (other.bottom, other.top)
        )

    def __hash__(self):
        return hash(self.poset)

    def __repr__(self):
        return f"Lattice(n={self.n}, bottom={self.bottom}, top={self.top})"

    def tuples(self, k: int) -> np.ndarray:
        return tuple_array(self.n, k)

    def tuple_leq(self, k: int, rows=None, cols=None) -> np.ndarray:
        """Componentwise order between (subsets of) tuples of ``L^k``."""
        t = self.tuples(k)
        a = t if rows is None else t[np.asarray(rows, dtype=np.intp)]
        b = t if cols is None else t[np.asarray(cols, dtype=np.intp)]
        out = np.ones((len(a), len(b)), dtype=bool)
        for i in range(k):
            out &= self.leq[a[:, i][:, None], b[:, i][None, :]]
        return out


def _bound_table(leq: np.ndarray, lower: bool) -> np.ndarray:
    """glb (``lower=True``) or lub table; entries are -1 where none is unique."""
    n = leq.shape[0]
    rel = leq if lower else leq.T
    # rel[c, a]: c is on the correct side of a
    size = rel.sum(axis=0)  # elements on the correct side of c
    table = np.full((n, n), -1, dtype=np.intp)
    for b in range(n):
        cand = rel & rel[:, [b]]  # cand[c, a]: c bounds both a and b
        score = np.where(cand, size[:, None], -1)
        best = score.argmax(axis=0)
        ok = cand[best, np.arange(n)]
        # every common bound must sit on the correct side of best
        ok &= ~(cand & ~rel[:, best]).any(axis=0)
        table[:, b] = np.where(ok, best, -1)
    return table


def lattice_from_poset(poset: Poset) -> Lattice:
    leq = poset.leq
    n = poset.n
    if n == 0:
        raise NotBounded("empty poset has no bounds")
    meet = _bound_table(leq, lower=True)
    join = _bound_table(leq, lower=False)
    for table, what in ((meet, "glb"), (join, "lub")):
        bad = np.argwhere(table < 0)
        if len(bad):
            a, b = (int(v) for v in bad[0])
            raise NotALattice(f"elements {a} and {b} have no unique {what}", pair=(a, b), bound=what)
    bottoms = np.flatnonzero(leq.all(axis=1))
    tops = np.flatnonzero(leq.all(axis=0))
    if len(bottoms) != 1 or len(tops) != 1:
        raise NotBounded("poset lacks a least or greatest element")
    return Lattice(poset, meet, join, int(bottoms[0]), int(tops[0]))


def lattice_from_leq(leq) -> Lattice:
    return lattice_from_poset(poset_from_leq(leq))


def lattice_from_covers(n: int, covers: Iterable[Sequence[int]]) -> Lattice:
    """Build a lattice from cover (or any order-generating) pairs ``(lower, upper)``."""
    pairs = [(int(a), int(b)) for a, b in covers]
    return lattice_from_leq(transitive_closure(n, pairs))


def chain(n: int) -> Lattice:
    return lattice_from_leq(np.triu(np.ones((n, n), dtype=bool)))


def direct_product(lattices: Sequence[Lattice], max_tuples: int = DEFAULT_MAX_TUPLES) -> Lattice:
    """Componentwise product; element index is mixed-radix, first factor most significant."""
    sizes = [L.n for L in lattices]
    total = int(np.prod(sizes, dtype=object))
    if total > max_tuples:
        raise BudgetExceeded(f"product has {total} elements (limit {max_tuples})", limit=max_tuples)
    digits = np.array(list(_iproduct(*[range(s) for s in sizes])), dtype=np.intp).reshape(total, len(sizes))
    weights = np.ones(len(sizes), dtype=np.intp)
    for i in range(len(sizes) - 2, -1, -1):
        weights[i] = weights[i + 1] * sizes[i + 1]
    leq = np.ones((total, total), dtype=bool)
    meet = np.zeros((total, total), dtype=np.intp)
    join = np.zeros((total, total), dtype=np.intp)
    for i, L in enumerate(lattices):
        a = digits[:, i][:, None]
        b = digits[:, i][None, :]
        leq &= L.leq[a, b]
        meet += L.meet[a, b] * weights[i]
        join += L.join[a, b] * weights[i]
    bottom = int(sum(L.bottom * w for L, w in zip(lattices, weights)))
    top = int(sum(L.top * w for L, w in zip(lattices, weights)))
    return Lattice(Poset(total, leq), meet, join, bottom, top)


def product(L: Lattice, k: int, max_tuples: int = DEFAULT_MAX_TUPLES) -> Lattice:
    """``L^k`` with elements encoded by :func:`encode`."""
    if k < 1:
        raise ValueError("arity must be >= 1")
    if L.n**k > max_tuples:
        raise BudgetExceeded(f"{L.n}^{k} tuples exceed limit {max_tuples}", limit=max_tuples)
    return direct_product([L] * k, max_tuples=max_tuples)


def dual(L: Lattice) -> Lattice:
    return Lattice(Poset(L.n, L.leq.T), L.join, L.meet, L.top, L.bottom)


def subset_bounds(L: Lattice, S: Iterable[int]) -> tuple[int, int]:
    """``(inf S, sup S)``; the empty set has inf = top and sup = bottom."""
    inf, sup = L.top, L.bottom
    for s in S:
        inf = int(L.meet[inf, s])
        sup = int(L.join[sup, s])
    return inf, sup


def _check_directed(L: Lattice, S: list[int], upward: bool, name: str) -> None:
    for a in S:
        for b in S:
            if upward:
                ok = any(L.leq[a, c] and L.leq[b, c] for c in S)
            else:
                ok = any(L.leq[c, a] and L.leq[c, b] for c in S)
            if not ok:
                way = "upward" if upward else "downward"
                raise NotDirected(f"{name} is not {way} directed at ({a}, {b})", pair=(a, b), set=name)


def separator_exists(L: Lattice, A: Iterable[int], B: Iterable[int]) -> int | None:
    """Smallest ``c`` with ``A < c < B`` (strictly), or ``None``."""
    A, B = sorted(set(A)), sorted(set(B))
    if not A or not B:
        raise ValueError("A and B must be nonempty")
    _check_directed(L, A, True, "A")
    _check_directed(L, B, False, "B")
    for a in A:
        for b in B:
            if not L.poset.lt(a, b):
                raise NotSeparated(f"A < B fails at ({a}, {b})", pair=(a, b))
    lt = L.leq & ~np.eye(L.n, dtype=bool)
    ok = lt[A, :].all(axis=0) & lt[:, B].all(axis=1)
    hits = np.flatnonzero(ok)
    return int(hits[0]) if len(hits) else None


def is_homomorphism(L: Lattice, M: Lattice, f: Sequence[int]) -> bool:
    """Whether ``f`` preserves binary meets, joins, 0 and 1."""
    f = np.asarray(f, dtype=np.intp)
    if len(f) != L.n:
        return False
    if f[L.bottom] != M.bottom or f[L.top] != M.top:
        return False
    fm = f[L.meet]
    fj = f[L.join]
    return bool(np.array_equal(fm, M.meet[f[:, None], f[None, :]]) and np.array_equal(fj, M.join[f[:, None], f[None, :]]))


def is_end_extension(L: Lattice, Lp: Lattice, embed: Sequence[int]) -> bool:
    embed = np.asarray(embed, dtype=np.intp)
    if len(embed) != L.n or ((embed < 0) | (embed >= Lp.n)).any():
        raise NotAnEmbedding("embedding must map every element of L into L'")
    if len(set(embed.tolist())) != L.n:
        raise NotAnEmbedding("embedding is not injective")
    if not is_homomorphism(L, Lp, embed):
        raise NotAnEmbedding("embedding is not a 0,1-lattice homomorphism")
    image = np.zeros(Lp.n, dtype=bool)
    image[embed] = True
    non_top = embed[np.arange(L.n) != L.top]
    below = Lp.leq[:, non_top].any(axis=1)
    return not (below & ~image).any()


def is_distributive(L: Lattice) -> bool:
    x = np.arange(L.n)[:, None, None]
    y = np.arange(L.n)[None, :, None]
    z = np.arange(L.n)[None, None, :]
    lhs = L.meet[x, L.join[y, z]]
    rhs = L.join[L.meet[x, y], L.meet[x, z]]
    return bool(np.array_equal(lhs, rhs))
