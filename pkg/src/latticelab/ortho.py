"""Ortholattices, horizontal sums and the orthocomplement factorization."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ComplementFails, DegenerateSummand, InvolutionFails, NotAntitone
from .lattice import DEFAULT_MAX_TUPLES, Lattice, direct_product, lattice_from_leq
from .order import UNDEFINED, FunctionTable, check_monotone, is_antichain
from .polynomials import DEFAULT_MAX_CLONE, Clone, _rows


@dataclass(frozen=True, eq=False)
class OrthoLattice:
    lattice: Lattice
    perp: np.ndarray

    def __post_init__(self):
        p = np.ascontiguousarray(self.perp, dtype=np.intp)
        p.setflags(write=False)
        object.__setattr__(self, "perp", p)

    @property
    def n(self) -> int:
        return self.lattice.n

    def __len__(self):
        return self.lattice.n

    def __eq__(self, other):
        return isinstance(other, OrthoLattice) and self.lattice == other.lattice and np.array_equal(self.perp, other.perp)

    def __hash__(self):
        return hash(self.lattice)

    def __repr__(self):
        return f"OrthoLattice(n={self.n}, perp={self.perp.tolist()})"


def validate_ortho(L: Lattice, perp) -> OrthoLattice:
    """Check involution, complementation and antitonicity, in that order."""
    p = np.asarray(perp, dtype=np.intp)
    if p.shape != (L.n,) or ((p < 0) | (p >= L.n)).any():
        raise ValueError("perp must map every element to an element")
    x = np.arange(L.n)
    bad = np.flatnonzero(p[p] != x)
    if len(bad):
        raise InvolutionFails(f"perp(perp({bad[0]})) != {bad[0]}", element=int(bad[0]))
    bad = np.flatnonzero((L.join[x, p] != L.top) | (L.meet[x, p] != L.bottom))
    if len(bad):
        raise ComplementFails(f"{bad[0]} and its perp are not complements", element=int(bad[0]))
    viol = L.leq & ~L.leq[p[None, :], p[:, None]]
    if viol.any():
        a, b = (int(v) for v in np.argwhere(viol)[0])
        raise NotAntitone(f"{a} <= {b} but perp({b}) !<= perp({a})", pair=(a, b))
    return OrthoLattice(L, p)


def ortho_product(O1: OrthoLattice, O2: OrthoLattice, max_tuples: int = DEFAULT_MAX_TUPLES) -> OrthoLattice:
    """Componentwise product; element ``(a, b)`` has index ``a * |O2| + b``."""
    L = direct_product([O1.lattice, O2.lattice], max_tuples=max_tuples)
    n2 = O2.n
    a, b = np.divmod(np.arange(L.n), n2)
    return validate_ortho(L, O1.perp[a] * n2 + O2.perp[b])


def horizontal_sum(O1: OrthoLattice, O2: OrthoLattice) -> tuple[OrthoLattice, np.ndarray, np.ndarray]:
    """Glue bottoms and tops, leave the two interiors mutually incomparable.

    New ids: 0 is bottom, then the interior of ``O1``, then the interior of
    ``O2`` (each in ascending old id), and the top last.  Returns the sum and
    both embeddings as old-id -> new-id arrays.
    """
    for name, O in (("first", O1), ("second", O2)):
        if O.n < 3:
            raise DegenerateSummand(f"{name} summand has empty interior", size=O.n)
    n = O1.n + O2.n - 2
    embeds = []
    nxt = 1
    for O in (O1, O2):
        L = O.lattice
        e = np.empty(L.n, dtype=np.intp)
        e[L.bottom] = 0
        e[L.top] = n - 1
        for x in range(L.n):
            if x not in (L.bottom, L.top):
                e[x] = nxt
                nxt += 1
        embeds.append(e)
    leq = np.zeros((n, n), dtype=bool)
    leq[0, :] = True
    leq[:, n - 1] = True
    perp = np.empty(n, dtype=np.intp)
    for O, e in zip((O1, O2), embeds):
        leq[np.ix_(e, e)] |= O.lattice.leq
        perp[e] = e[O.perp]
    L = lattice_from_leq(leq)
    return validate_ortho(L, perp), embeds[0], embeds[1]


def is_de_morgan(O: OrthoLattice) -> bool:
    p = O.perp
    L = O.lattice
    return bool(np.array_equal(p[L.join], L.meet[p[:, None], p[None, :]]))


@dataclass
class FactorizationReport:
    """Everything built while factoring ``f`` through monotone maps and perp.

    ``g1`` and ``g2`` map ``O`` into ``O1`` (arrays of O1 ids), ``h`` is the
    partial table on ``O1`` supported on ``A``.
    """

    O1: OrthoLattice
    embed_O: np.ndarray
    embed_OO: np.ndarray
    A: list[int]
    g1: np.ndarray
    g2: np.ndarray
    h: FunctionTable
    antichain: bool
    g_monotone: bool
    h_monotone: bool
    identity_verified: bool
    failures: list[int]


def factorization_report(O: OrthoLattice, f: FunctionTable) -> FactorizationReport:
    """Write arbitrary ``f`` as ``h(g1(x) v g2(x)^perp)`` inside ``O + O x O``."""
    if not f.is_total or f.arity != 1:
        raise ValueError("factorization needs a total unary function")
    OO = ortho_product(O, O)
    O1, eO, eOO = horizontal_sum(O, OO)
    L, L1 = O.lattice, O1.lattice
    n = L.n
    x = np.arange(n)
    g1 = eOO[x * n + L.bottom]
    g2 = eOO[L.top * n + x]
    graph = eOO[x * n + O.perp]
    A = graph.tolist()
    h_vals = np.full(L1.n, UNDEFINED, dtype=np.intp)
    h_vals[graph] = eO[f.values]
    h = FunctionTable(L1, 1, h_vals)
    antichain = is_antichain(L1.poset, A) and len(set(A)) == n
    g_mono = bool(L1.leq[g1[:, None], g1[None, :]][L.leq].all() and L1.leq[g2[:, None], g2[None, :]][L.leq].all())
    h_mono = check_monotone(h)[0]
    arg = L1.join[g1, O1.perp[g2]]
    failures = []
    for xi in range(n):
        v = h_vals[arg[xi]]
        if v == UNDEFINED or v != eO[f.values[xi]]:
            failures.append(xi)
    return FactorizationReport(O1, eO, eOO, A, g1, g2, h, antichain, g_mono, h_mono, not failures, failures)


def ortho_clone(O: OrthoLattice, arity: int, restriction=None, max_size: int = DEFAULT_MAX_CLONE,
                engine: str = "auto") -> Clone:
    """Orthopolynomial functions: projections and constants closed under join, meet, perp."""
    return Clone(O, arity, _rows(O.lattice, arity, restriction), with_perp=True, max_size=max_size, engine=engine)
