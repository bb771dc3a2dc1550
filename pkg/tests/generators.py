"""Random instance builders shared by the property and acceptance suites."""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from conftest import SUITE
from latticelab.gallery import random_lattice
from latticelab.order import FunctionTable, compare_functions, enumerate_monotone, linear_extension
from latticelab.terms import Const, JoinOf, MeetOf, Slot, Var, skeletonize, substitute, term_table

# (lattice, arity) shapes with n^k <= 27 whose monotone maps can be listed in well under a second
EXTENSION_SHAPES = [
    ("two", 1), ("two", 2), ("two", 3), ("two", 4),
    ("chain3", 1), ("chain3", 2), ("chain4", 1), ("chain4", 2), ("chain5", 1),
    ("boolean2", 1), ("boolean2", 2), ("boolean3", 1),
    ("m3", 1), ("m4", 1), ("m5", 1), ("n5", 1),
    ("example1_23", 1), ("example2_32", 1), ("example3_22", 1),
    ("random5", 1), ("random6", 1), ("random7", 1),
]


def shape_lattice(name):
    if name.startswith("random"):
        return random_lattice(int(name[6:]), 7)
    return SUITE[name]


@lru_cache(maxsize=None)
def monotone_array(name, k):
    """Every monotone total table of the named lattice at arity ``k``, as rows."""
    L = shape_lattice(name)
    return np.stack([f.values for f in enumerate_monotone(L, k)])


def random_partial_monotone(rng, name, k):
    """A random monotone total map restricted to a random nonempty domain."""
    L = shape_lattice(name)
    tables = monotone_array(name, k)
    vals = tables[rng.integers(len(tables))]
    size = L.n**k
    dom = rng.choice(size, size=rng.integers(1, size + 1), replace=False)
    return FunctionTable(L, k, vals).restrict(dom)


def random_monotone(rng, L, k):
    """Monotone table built along a linear extension, each value uniform above its lower bound."""
    below = L.tuple_leq(k)
    vals = np.full(L.n**k, -1)
    for t in linear_extension(L, k).tolist():
        lb = L.bottom
        for z in np.flatnonzero(below[:, t]):
            if z != t:
                lb = L.join[lb, vals[z]]
        vals[t] = rng.choice(np.flatnonzero(L.leq[lb]))
    return vals


def random_term(rng, arity, n, depth=3, slots=False):
    """Random term over variables and constants (or slots) with binary join/meet nodes."""
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.5:
            return Var(int(rng.integers(1, arity + 1)))
        return Slot(0) if slots else Const(int(rng.integers(n)))
    op = JoinOf if rng.random() < 0.5 else MeetOf
    return op((random_term(rng, arity, n, depth - 1, slots), random_term(rng, arity, n, depth - 1, slots)))


def random_template(rng, arity, n, depth=3):
    """A template whose slots are numbered ``#1..#m`` left to right, ``m >= 1``."""
    while True:
        t = random_term(rng, arity, n, depth, slots=True)
        counter = iter(range(1, 1000))

        def renumber(u):
            if isinstance(u, Slot):
                return Slot(next(counter))
            if isinstance(u, (JoinOf, MeetOf)):
                return type(u)(tuple(renumber(a) for a in u.args))
            return u

        t = renumber(t)
        m = next(counter) - 1
        if m >= 1:
            return t, m


def thinning_family(rng, L, arity, tries=40):
    """Shared-skeleton terms with pairwise incomparable induced functions (at least two)."""
    while True:
        template, m = random_template(rng, arity, L.n)
        terms, fns = [], []
        for _ in range(tries):
            coeffs = rng.integers(0, L.n, size=m).tolist()
            t = substitute(template, coeffs)
            f = term_table(t, L, arity)
            if all(compare_functions(f, g) == "incomparable" for g in fns):
                terms.append(t)
                fns.append(f)
        if len(terms) >= 2:
            assert all(skeletonize(t).template == template for t in terms)
            return terms


def eventually_constant_sequence(rng, clone, point_index, tail_min=2):
    """Clone-member terms whose values at a point settle on one value ``v``; returns (terms, v)."""
    values = clone.tables[:, point_index]
    v = int(values[rng.integers(len(values))])
    settled = np.flatnonzero(values == v)
    prefix = rng.integers(0, len(values), size=rng.integers(0, 5))
    tail = rng.choice(settled, size=rng.integers(tail_min, tail_min + 4))
    return [clone.term(int(i)) for i in np.concatenate([prefix, tail])], v


def sup_scan(L, S, v):
    """Least element of ``S`` above every ``y in S`` with ``y <= v``, by direct search."""
    below = [y for y in S if L.leq[y, v]]
    upper = [u for u in S if all(L.leq[y, u] for y in below)]
    least = [u for u in upper if all(L.leq[u, w] for w in upper)]
    assert len(least) == 1
    return least[0]
