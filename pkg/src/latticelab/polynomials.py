"""Clones of polynomial functions, interpolation and the sigma-machinery.

The clone is materialised as a table per member, restricted to a chosen set of
points of ``L^k``.  Members are deduplicated by their table; each one keeps the
derivation that first produced it so a witness term can be rebuilt.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BudgetExceeded,
    FunctionsComparable,
    NotALattice,
    NotASublatticeCandidate,
    NotBounded,
    SkeletonMismatch,
)
from .lattice import Lattice, lattice_from_leq
from .order import UNDEFINED, FunctionTable, check_monotone, compare_functions
from .terms import (
    Const,
    InfOf,
    JoinOf,
    MeetOf,
    Perp,
    SupOf,
    Term,
    Var,
    evaluate_many,
    max_var,
    skeletonize,
    term_table,
)

DEFAULT_MAX_CLONE = 250_000
_CHUNK = 1 << 19  # candidate pairs per vectorised batch


def _row_dtype(n: int):
    if n <= 1 << 8:
        return np.uint8
    if n <= 1 << 16:
        return np.uint16
    return np.uint32


class _KeyIndex:
    """Exact membership for table rows via sorted byte-string keys."""

    def __init__(self, width: int, dtype):
        self._void = np.dtype((np.void, max(1, width * np.dtype(dtype).itemsize)))
        self._keys = np.empty(0, dtype=self._void)
        self._pos = np.empty(0, dtype=np.intp)

    def keys(self, rows: np.ndarray) -> np.ndarray:
        rows = np.ascontiguousarray(rows)
        if rows.shape[1] == 0:
            return np.zeros(rows.shape[0], dtype=self._void)
        return rows.view(self._void).ravel()

    def lookup(self, keys: np.ndarray) -> np.ndarray:
        """Member index per key, ``-1`` when absent."""
        if len(self._keys) == 0:
            return np.full(len(keys), -1, dtype=np.intp)
        at = np.searchsorted(self._keys, keys)
        at_c = np.minimum(at, len(self._keys) - 1)
        hit = (at < len(self._keys)) & (self._keys[at_c] == keys)
        return np.where(hit, self._pos[at_c], -1)

    def add(self, keys: np.ndarray, first_index: int) -> None:
        allk = np.concatenate([self._keys, keys])
        allp = np.concatenate([self._pos, np.arange(first_index, first_index + len(keys), dtype=np.intp)])
        order = np.argsort(allk, kind="stable")
        self._keys = allk[order]
        self._pos = allp[order]


_OPS = ("join", "meet", "perp", "var", "const")
_DENSE_LIMIT = 1 << 24
# below this many possible tables the numpy engine beats the JIT start-up cost
_SMALL_SPACE = 1 << 10


class Clone:
    """Closure of projections and constants under pointwise operations.

    ``rows`` are the tuple indices of ``L^k`` the tables are restricted to.
    ``derivation(i)`` is ``("var", j)``, ``("const", c)``, ``("join", a, b)``,
    ``("meet", a, b)`` or ``("perp", a)`` with ``a, b`` earlier member indices.

    Members are inserted breadth-first: generators (projections, then
    constants), then round by round; within a round the perp images of the
    frontier come first, followed by the pairs ``(i, j)`` for each frontier
    member ``j`` and every ``i <= j``, join before meet.
    """

    def __init__(self, algebra, arity: int, rows: np.ndarray, with_perp: bool, max_size: int,
                 engine: str = "auto"):
        self.algebra = algebra
        self.lattice: Lattice = getattr(algebra, "lattice", algebra)
        self.arity = arity
        self.rows = np.asarray(rows, dtype=np.intp)
        self.with_perp = with_perp
        self.max_size = max_size
        n, width = self.lattice.n, len(self.rows)
        fits = width * np.log2(max(n, 2)) < 62
        if engine == "auto":
            if n**width <= _SMALL_SPACE:
                engine = "numpy"
            else:
                engine = "compiled" if fits else "hashed"
        if engine not in ("compiled", "hashed", "numpy"):
            raise ValueError(f"unknown engine {engine!r}")
        if engine == "compiled" and not fits:
            raise ValueError("table keys do not fit 64 bits; use the hashed or numpy engine")
        self.engine = engine
        self._dtype = _row_dtype(n)
        self._tables = np.empty((64, width), dtype=self._dtype)
        self._derivs = np.empty((64, 3), dtype=np.int64)
        self._size = 0
        self._terms: dict[int, Term] = {}
        self.rounds = 0
        if engine == "compiled":
            self._weights = np.array([n ** (width - 1 - d) for d in range(width)], dtype=np.int64)
            self._use_dense = n**width <= _DENSE_LIMIT
            from numba import types
            from numba.typed import Dict

            self._dense = np.full(n**width if self._use_dense else 1, -1, dtype=np.int64)
            self._seen = Dict.empty(types.int64, types.int64)
        elif engine == "hashed":
            self._slots = np.full(128, -1, dtype=np.int64)
            self._hashes = np.empty(64, dtype=np.int64)
        else:
            self._index = _KeyIndex(width, self._dtype)
        self._close()

    def __len__(self):
        return self._size

    @property
    def tables(self) -> np.ndarray:
        return self._tables[: self._size]

    def derivation(self, i: int) -> tuple:
        op, a, b = (int(v) for v in self._derivs[i])
        name = _OPS[op]
        if name in ("var", "const", "perp"):
            return (name, a)
        return (name, a, b)

    @property
    def derivations(self) -> list[tuple]:
        return [self.derivation(i) for i in range(self._size)]

    # construction ---------------------------------------------------------

    def _grow(self, need: int) -> None:
        if need > len(self._tables):
            cap = min(max(need, 2 * len(self._tables)), max(self.max_size, need))
            t = np.empty((cap, self._tables.shape[1]), dtype=self._dtype)
            t[: self._size] = self._tables[: self._size]
            d = np.empty((cap, 3), dtype=np.int64)
            d[: self._size] = self._derivs[: self._size]
            self._tables, self._derivs = t, d
            if self.engine == "hashed":
                h = np.empty(cap, dtype=np.int64)
                h[: self._size] = self._hashes[: self._size]
                self._hashes = h
        if self.engine == "hashed" and 2 * max(need, len(self._tables)) > len(self._slots):
            from . import _kernels as K

            # keep the load factor at or below one half
            self._slots = np.full(1 << (2 * len(self._tables) - 1).bit_length(), -1, dtype=np.int64)
            K.rehash(self._tables, self._slots, self._hashes, self._size)

    def _budget(self):
        raise BudgetExceeded(
            f"clone exceeds {self.max_size} members",
            limit=self.max_size,
            partial={"size": self._size, "rounds": self.rounds},
        )

    def _offer(self, cand: np.ndarray, derive: np.ndarray) -> None:
        """Numpy engine: append first occurrences of unseen rows of ``cand``."""
        if len(cand) == 0:
            return
        keys = self._index.keys(cand.astype(self._dtype, copy=False))
        unseen = np.flatnonzero(self._index.lookup(keys) < 0)
        if len(unseen) == 0:
            return
        _, first = np.unique(keys[unseen], return_index=True)
        fresh = unseen[np.sort(first)]
        if self._size + len(fresh) > self.max_size:
            # keep the members that fit, in order, before reporting
            fresh = fresh[: self.max_size - self._size]
            self._append(cand[fresh], derive[fresh], keys[fresh])
            self._budget()
        self._append(cand[fresh], derive[fresh], keys[fresh])

    def _append(self, rows, derivs, keys):
        need = self._size + len(rows)
        self._grow(need)
        self._tables[self._size : need] = rows
        self._derivs[self._size : need] = derivs
        self._index.add(keys, self._size)
        self._size = need

    def _add_generator(self, row: np.ndarray, deriv: tuple) -> None:
        row = row.astype(self._dtype)
        if self.engine == "numpy":
            self._offer(row[None, :], np.array([deriv], dtype=np.int64))
            return
        if self.engine == "hashed":
            from . import _kernels as K

            if K.hashed_lookup(self._tables, self._slots, row) >= 0:
                return
            if self._size >= self.max_size:
                self._budget()
            self._grow(self._size + 1)
            self._tables[self._size] = row
            self._derivs[self._size] = deriv
            K.hashed_insert(self._tables, self._slots, self._hashes, self._size)
            self._size += 1
            return
        key = int(np.dot(row.astype(np.int64), self._weights)) if len(row) else 0
        present = self._dense[key] >= 0 if self._use_dense else key in self._seen
        if present:
            return
        if self._size >= self.max_size:
            self._budget()
        self._grow(self._size + 1)
        self._tables[self._size] = row
        self._derivs[self._size] = deriv
        if self._use_dense:
            self._dense[key] = self._size
        else:
            self._seen[key] = self._size
        self._size += 1

    def _close(self) -> None:
        L = self.lattice
        pts = L.tuples(self.arity)[self.rows]
        for i in range(self.arity):
            self._add_generator(pts[:, i], (3, i + 1, 0))
        for c in range(L.n):
            self._add_generator(np.full(len(self.rows), c), (4, c, 0))
        join, meet = L.join.astype(self._dtype), L.meet.astype(self._dtype)
        perp = getattr(self.algebra, "perp", None) if self.with_perp else None
        if perp is not None:
            perp = np.asarray(perp).astype(self._dtype)
        start = 0
        # a clone holding all n^width tables is saturated; later rounds add nothing
        everything = L.n ** len(self.rows)
        self._everything = everything if everything < 2**62 else -1
        while start < self._size < everything:
            stop = self._size
            self.rounds += 1
            if self.engine == "compiled":
                self._round_compiled(start, stop, join, meet, perp)
            elif self.engine == "hashed":
                self._round_hashed(start, stop, join, meet, perp)
            else:
                self._round_numpy(start, stop, join, meet, perp)
            start = stop

    def _round_compiled(self, start, stop, join, meet, perp):
        from . import _kernels as K

        if perp is not None:
            j = start
            while True:
                status, size, j = K.unary_closure(
                    self._tables, self._size, start, stop, j, perp, self._weights,
                    self._dense, self._use_dense, self._seen, self.max_size, self._derivs, self._everything)
                self._size = size
                if status == K.DONE:
                    break
                if status == K.BUDGET:
                    self._budget()
                self._grow(self._size + 1)
            if self._size == self._everything:
                return
        j, i, op = start, 0, 0
        while True:
            status, size, j, i, op = K.pair_closure(
                self._tables, self._size, start, stop, j, i, op, join, meet, self._weights,
                self._dense, self._use_dense, self._seen, self.max_size, self._derivs, self._everything)
            self._size = size
            if status == K.DONE:
                return
            if status == K.BUDGET:
                self._budget()
            self._grow(self._size + 1)

    def _round_hashed(self, start, stop, join, meet, perp):
        from . import _kernels as K

        def cap():
            return min(len(self._tables), len(self._slots) // 2)

        if perp is not None:
            j = start
            while True:
                status, size, j = K.unary_closure_hashed(
                    self._tables, self._size, start, stop, j, perp, self._slots, self._hashes,
                    self.max_size, self._derivs, cap(), self._everything)
                self._size = size
                if status == K.DONE:
                    break
                if status == K.BUDGET:
                    self._budget()
                self._grow(self._size + 1)
            if self._size == self._everything:
                return
        j, i, op = start, 0, 0
        while True:
            status, size, j, i, op = K.pair_closure_hashed(
                self._tables, self._size, start, stop, j, i, op, join, meet,
                self._slots, self._hashes, self.max_size, self._derivs, cap(), self._everything)
            self._size = size
            if status == K.DONE:
                return
            if status == K.BUDGET:
                self._budget()
            self._grow(self._size + 1)

    def _round_numpy(self, start, stop, join, meet, perp):
        if perp is not None:
            src = np.arange(start, stop)
            cand = perp[self._tables[start:stop]]
            self._offer(cand, np.stack([np.full_like(src, 2), src, src], axis=1))
            if self._size == self._everything:
                return
        j = start
        while j < stop:
            # batch of j values whose pair counts (j + 1 each) fit one chunk
            hi = j + 1
            total = j + 1
            while hi < stop and total + hi + 1 <= _CHUNK:
                total += hi + 1
                hi += 1
            jv = np.arange(j, hi, dtype=np.intp)
            j = hi
            counts = jv + 1
            J = np.repeat(jv, counts)
            offsets = np.repeat(np.cumsum(counts) - counts, counts)
            I = np.arange(len(J), dtype=np.intp) - offsets
            a = self._tables[I]
            b = self._tables[J]
            cand = np.empty((2 * len(J), len(self.rows)), dtype=self._dtype)
            cand[0::2] = join[a, b]
            cand[1::2] = meet[a, b]
            del a, b
            derive = np.empty((2 * len(J), 3), dtype=np.int64)
            derive[0::2, 0] = 0
            derive[1::2, 0] = 1
            derive[:, 1] = np.repeat(I, 2)
            derive[:, 2] = np.repeat(J, 2)
            self._offer(cand, derive)
            if self._size == self._everything:
                return

    # queries --------------------------------------------------------------

    def find(self, values: Sequence[int]) -> int | None:
        """Index of the member whose restricted table equals ``values``."""
        row = np.asarray(values, dtype=np.intp).reshape(1, -1)
        if row.shape[1] != len(self.rows):
            raise ValueError("values must cover exactly the restriction rows")
        if (row < 0).any() or (row >= self.lattice.n).any():
            return None
        if self.engine == "numpy":
            got = int(self._index.lookup(self._index.keys(row.astype(self._dtype)))[0])
        elif self.engine == "hashed":
            from . import _kernels as K

            got = int(K.hashed_lookup(self._tables, self._slots, row[0].astype(self._dtype)))
        else:
            key = int(np.dot(row[0].astype(np.int64), self._weights)) if row.shape[1] else 0
            got = int(self._dense[key]) if self._use_dense else int(self._seen.get(key, -1))
        return None if got < 0 else got

    def find_function(self, f: FunctionTable) -> int | None:
        vals = f.values[self.rows]
        if (vals == UNDEFINED).any():
            raise ValueError("function is undefined on part of the restriction set")
        return self.find(vals)

    def __contains__(self, f) -> bool:
        if isinstance(f, FunctionTable):
            return self.find_function(f) is not None
        return self.find(f) is not None

    def function(self, i: int) -> FunctionTable:
        L = self.lattice
        values = np.full(L.n**self.arity, UNDEFINED, dtype=np.intp)
        values[self.rows] = self._tables[i]
        return FunctionTable(L, self.arity, values)

    def functions(self):
        for i in range(self._size):
            yield self.function(i)

    def term(self, i: int) -> Term:
        """Witness term for member ``i`` rebuilt from its derivation chain."""
        stack = [i]
        while stack:
            j = stack[-1]
            if j in self._terms:
                stack.pop()
                continue
            d = self.derivation(j)
            parents = [p for p in d[1:] if p not in self._terms] if d[0] in ("join", "meet", "perp") else []
            if parents:
                stack.extend(parents)
                continue
            stack.pop()
            if d[0] == "var":
                t = Var(d[1])
            elif d[0] == "const":
                t = Const(d[1])
            elif d[0] == "perp":
                t = Perp(self._terms[d[1]])
            elif d[0] == "join":
                t = JoinOf((self._terms[d[1]], self._terms[d[2]]))
            else:
                t = MeetOf((self._terms[d[1]], self._terms[d[2]]))
            self._terms[j] = t
        return self._terms[i]

    def depth(self, i: int) -> int:
        d = self.derivation(i)
        if d[0] in ("var", "const"):
            return 0
        return 1 + max(self.depth(p) for p in d[1:])


def _rows(L: Lattice, arity: int, restriction) -> np.ndarray:
    if restriction is None:
        return np.arange(L.n**arity, dtype=np.intp)
    from .lattice import encode

    out = []
    for r in restriction:
        out.append(int(r) if np.isscalar(r) else encode(r, L.n))
    return np.array(sorted(set(out)), dtype=np.intp)


def polynomial_clone(L: Lattice, arity: int, restriction=None, max_size: int = DEFAULT_MAX_CLONE,
                     engine: str = "auto") -> Clone:
    """k-ary polynomial functions on ``restriction`` (tuple indices or tuples; default all)."""
    return Clone(L, arity, _rows(L, arity, restriction), with_perp=False, max_size=max_size, engine=engine)


def interpolate(L: Lattice, f: FunctionTable, max_size: int = DEFAULT_MAX_CLONE, clone: Clone | None = None) -> Term | None:
    """A polynomial agreeing with ``f`` on its domain, or ``None`` if there is none.

    ``clone`` may be passed to reuse a closure computed on the same domain.
    """
    dom = f.domain
    if check_monotone(f)[0] is False:
        return None  # polynomials are monotone
    if clone is None:
        clone = polynomial_clone(L, f.arity, dom, max_size=max_size)
    elif not np.array_equal(clone.rows, dom):
        raise ValueError("clone restriction differs from the function domain")
    i = clone.find(f.values[dom])
    return None if i is None else clone.term(i)


# --- thinning -------------------------------------------------------------

@dataclass
class ThinningReport:
    template: Term
    slots: int
    coefficients: list[tuple[int, ...]]
    antichain: bool
    violations: list[tuple[int, int]] = field(default_factory=list)


def _tuple_leq(L: Lattice, a: Sequence[int], b: Sequence[int]) -> bool:
    return all(L.leq[x, y] for x, y in zip(a, b))


def thinning_check(terms: Sequence[Term], L, arity: int | None = None) -> ThinningReport:
    """Coefficients of pairwise incomparable same-skeleton polynomials form an antichain."""
    if not terms:
        raise ValueError("need at least one term")
    lattice = getattr(L, "lattice", L)
    skeletons = [skeletonize(t) for t in terms]
    template = skeletons[0].template
    for i, s in enumerate(skeletons):
        if s.template != template:
            raise SkeletonMismatch(f"term {i} has a different skeleton", index=i)
    if arity is None:
        arity = max(1, max(max_var(t) for t in terms))
    fns = [term_table(t, L, arity) for t in terms]
    for i in range(len(fns)):
        for j in range(i + 1, len(fns)):
            rel = compare_functions(fns[i], fns[j])
            if rel != "incomparable":
                raise FunctionsComparable(f"terms {i} and {j} induce {rel} functions", pair=(i, j), relation=rel)
    coeffs = [s.coefficients for s in skeletons]
    violations = [
        (i, j)
        for i in range(len(coeffs))
        for j in range(len(coeffs))
        if i != j and _tuple_leq(lattice, coeffs[i], coeffs[j])
    ]
    return ThinningReport(template, len(coeffs[0]), coeffs, not violations, violations)


# --- sigma-polynomials ----------------------------------------------------

def liminf_term(seq: Sequence[Term]) -> SupOf:
    """``sup_k inf_{n >= k} p_n`` over a finite sequence, as a sigma-term."""
    return SupOf(tuple(InfOf(tuple(seq[k:])) for k in range(len(seq))))


def liminf_eval(seq: Sequence[Term], L, point: Sequence[int]) -> tuple[int, bool]:
    """``(sup_k inf_{k<=n<=m} p_n(point), stabilized)``.

    ``stabilized`` means the last two values agree, i.e. a constant final
    segment of length at least two.
    """
    if not seq:
        raise ValueError("sequence must be nonempty")
    lattice = getattr(L, "lattice", L)
    pt = np.asarray([point], dtype=np.intp).reshape(1, -1)
    vals = [int(evaluate_many(p, L, pt)[0]) for p in seq]
    acc = lattice.bottom
    suffix = lattice.top
    # suffix infima from the right, then their join
    for v in reversed(vals):
        suffix = int(lattice.meet[suffix, v])
        acc = int(lattice.join[acc, suffix])
    stabilized = len(vals) >= 2 and vals[-1] == vals[-2]
    return acc, stabilized


def lower_approximation(f: FunctionTable, S: Iterable[int]) -> FunctionTable:
    """``x -> sup_S {y in S : y <= f(x)}`` for ``x`` in ``S^k``, as a partial table."""
    L = f.lattice
    if not f.is_total:
        raise ValueError("lower_approximation needs a total function")
    S = sorted(set(int(s) for s in S))
    if L.bottom not in S or L.top not in S:
        raise NotASublatticeCandidate("S must contain bottom and top", elements=S)
    try:
        sub = lattice_from_leq(L.leq[np.ix_(S, S)])
    except (NotALattice, NotBounded) as exc:
        raise NotASublatticeCandidate(f"S is not a lattice under the induced order: {exc}", elements=S) from exc
    S_arr = np.array(S, dtype=np.intp)
    # below[v, s]: S[s] <= v in L
    below = L.leq[S_arr, :].T
    sup_of = np.empty(L.n, dtype=np.intp)
    for v in range(L.n):
        acc = sub.bottom
        for s in np.flatnonzero(below[v]):
            acc = sub.join[acc, s]
        sup_of[v] = S_arr[acc]
    k = f.arity
    from .lattice import tuple_array

    local = tuple_array(len(S), k)
    pts = S_arr[local]
    n = L.n
    idx = np.zeros(len(pts), dtype=np.intp)
    for i in range(k):
        idx = idx * n + pts[:, i]
    values = np.full(n**k, UNDEFINED, dtype=np.intp)
    values[idx] = sup_of[f.values[idx]]
    return FunctionTable(L, k, values)
