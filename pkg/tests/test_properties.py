import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

import oracles
from conftest import SUITE, plain
from generators import (
    EXTENSION_SHAPES,
    eventually_constant_sequence,
    monotone_array,
    random_partial_monotone,
    random_term,
    sup_scan,
    thinning_family,
)
from latticelab.errors import NotASublatticeCandidate
from latticelab.gallery import random_lattice, random_poset
from latticelab.lattice import transitive_closure
from latticelab.order import (
    UNDEFINED,
    FunctionTable,
    check_monotone,
    extend_partial,
    heights,
    is_antichain,
    is_chain,
    longest_chain,
    max_antichain,
    min_chain_cover,
    mirsky_layers,
    ramsey_witness,
)
from latticelab.polynomials import (
    liminf_eval,
    lower_approximation,
    polynomial_clone,
    thinning_check,
)
from latticelab.terms import evaluate_many, format_term, parse_term

SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
seeds = st.integers(0, 2**32 - 1)


@SETTINGS
@given(st.integers(2, 12), seeds)
def test_random_lattice_axioms(n, seed):
    L = random_lattice(n, seed)
    assert L.n == n
    nn, leq, meet, join = plain(L)
    glb, lub = oracles.bounds(nn, leq)
    assert meet == glb and join == lub
    x = np.arange(n)
    a, b = x[:, None], x[None, :]
    assert (L.meet[a, L.join[a, b]] == a).all() and (L.join[a, L.meet[a, b]] == a).all()


@SETTINGS
@given(st.integers(1, 9), seeds)
def test_koenig_duality(n, seed):
    P = random_poset(n, np.random.default_rng(seed))
    leq = P.leq.tolist()
    A = max_antichain(P)
    C = min_chain_cover(P)
    assert is_antichain(P, A) and all(is_chain(P, c) for c in C)
    assert sorted(x for c in C for x in c) == list(range(n))
    assert len(A) == len(C) == oracles.max_antichain_size(n, leq)


@SETTINGS
@given(st.integers(1, 10), seeds)
def test_mirsky(n, seed):
    P = random_poset(n, np.random.default_rng(seed))
    layers = mirsky_layers(P)
    chainlen = oracles.longest_chain_length(n, P.leq.tolist())
    assert len(layers) == len(longest_chain(P)) == chainlen == int(heights(P).max())
    assert all(is_antichain(P, layer) for layer in layers)
    assert is_chain(P, longest_chain(P))


@SETTINGS
@given(st.sampled_from([(3, 3), (4, 3), (3, 4), (2, 5), (5, 2)]), seeds)
def test_ramsey_witness_valid(rs, seed):
    r, s = rs
    P = random_poset((r - 1) * (s - 1) + 1, np.random.default_rng(seed))
    w = ramsey_witness(P, r, s)
    if w.kind == "chain":
        assert len(w.elements) == r and is_chain(P, list(w.elements))
    else:
        assert w.kind == "antichain"
        assert len(w.elements) == s and is_antichain(P, w.elements)


@SETTINGS
@given(st.sampled_from(EXTENSION_SHAPES), seeds)
def test_extension_is_least(shape, seed):
    name, k = shape
    f = random_partial_monotone(np.random.default_rng(seed), name, k)
    g = extend_partial(f)
    dom = f.domain
    assert np.array_equal(g.values[dom], f.values[dom])
    assert check_monotone(g)[0]
    tables = monotone_array(name, k)
    ext = tables[(tables[:, dom] == f.values[dom]).all(axis=1)]
    L = f.lattice
    assert len(ext) >= 1
    assert L.leq[g.values[None, :], ext].all()


@SETTINGS
@given(st.sampled_from(["chain3", "m3", "m4", "n5", "boolean2", "example2_32"]), st.integers(1, 2), seeds)
def test_thinning_coefficients_form_antichain(name, arity, seed):
    L = SUITE[name]
    terms = thinning_family(np.random.default_rng(seed), L, arity)
    r = thinning_check(terms, L, arity)
    assert r.antichain and r.violations == []


@SETTINGS
@given(st.sampled_from(sorted(SUITE)), st.integers(1, 3), seeds)
def test_term_round_trip(name, arity, seed):
    L = SUITE[name]
    t = random_term(np.random.default_rng(seed), arity, L.n, depth=4)
    text = format_term(t)
    assert parse_term(text) == t
    pts = L.tuples(arity)
    assert np.array_equal(evaluate_many(parse_term(text), L, pts), evaluate_many(t, L, pts))


@SETTINGS
@given(st.sampled_from(["chain3", "m3", "n5", "boolean2", "example3_22"]), seeds)
def test_liminf_eventually_constant(name, seed):
    rng = np.random.default_rng(seed)
    L = SUITE[name]
    clone = polynomial_clone(L, 1)
    x = int(rng.integers(L.n))
    seq, v = eventually_constant_sequence(rng, clone, x)
    value, stabilized = liminf_eval(seq, L, (x,))
    assert value == v and stabilized


@SETTINGS
@given(st.integers(3, 9), seeds)
def test_lower_approximation_is_sup_scan(n, seed):
    rng = np.random.default_rng(seed)
    L = random_lattice(n, seed)
    inner = [x for x in range(n) if x not in (L.bottom, L.top)]
    S = sorted({L.bottom, L.top, *rng.choice(inner, size=rng.integers(0, len(inner) + 1), replace=False).tolist()})
    f = FunctionTable(L, 1, rng.integers(0, n, size=n))
    try:
        g = lower_approximation(f, S)
    except NotASublatticeCandidate:
        return
    for x in range(n):
        if x in S:
            assert g.values[x] == sup_scan(L, S, int(f.values[x]))
        else:
            assert g.values[x] == UNDEFINED


@SETTINGS
@given(st.sampled_from([("two", 2), ("chain3", 2), ("chain4", 2), ("boolean2", 2), ("n5", 2), ("m3", 1),
                        ("m5", 1), ("example1_23", 1), ("example3_22", 2)]))
def test_clone_members_monotone(shape):
    name, arity = shape
    L = SUITE[name]
    c = polynomial_clone(L, arity)
    tl = L.tuple_leq(arity)
    for row in c.tables:
        assert L.leq[row[:, None], row[None, :]][tl].all()


@SETTINGS
@given(st.integers(1, 8), st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7)), max_size=12))
def test_transitive_closure_matches_oracle(n, pairs):
    pairs = [(a % n, b % n) for a, b in pairs]
    got = transitive_closure(n, pairs)
    assert got.tolist() == oracles.leq_from_covers(n, pairs)
