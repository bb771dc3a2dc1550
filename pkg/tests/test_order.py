import itertools
from math import comb

import numpy as np
import pytest

import oracles
from conftest import SUITE, plain
from latticelab.errors import ArityMismatch, BudgetExceeded, NotAnAntichain, NotMonotoneOnDomain, TooSmall
from latticelab.gallery import make_boolean, make_example, make_mn, random_poset
from latticelab.lattice import Poset, chain, poset_from_leq
from latticelab.order import (
    UNDEFINED,
    FunctionTable,
    check_monotone,
    compare_functions,
    count_monotone,
    enumerate_monotone,
    extend_partial,
    heights,
    is_antichain,
    is_chain,
    linear_extension,
    longest_chain,
    max_antichain,
    min_chain_cover,
    mirsky_layers,
    ramsey_witness,
    sperner_family,
)

# monotone counts frozen from the filtering oracle in tests/oracles.py
UNARY_MONOTONE = {"two": 3, "chain3": 10, "chain4": 35, "chain5": 126, "boolean2": 36, "m3": 178,
                  "m4": 1430, "n5": 136, "example1_23": 1913, "example3_22": 462}
BINARY_MONOTONE = {"two": 6, "chain3": 175}
# width, height from subset scans
WIDTH_HEIGHT = {"two": (1, 2), "chain3": (1, 3), "chain4": (1, 4), "chain5": (1, 5), "boolean2": (2, 3),
                "boolean3": (3, 4), "m3": (3, 3), "m4": (4, 3), "n5": (2, 4), "example1_23": (2, 5),
                "example2_32": (3, 5), "example3_22": (1, 6)}


def antichain_poset(n):
    return Poset(n, np.eye(n, dtype=bool))


def test_frozen_counts_match_oracle_small():
    n, leq, _, _ = plain(chain(3))
    assert len(oracles.monotone_tables(n, leq, 1)) == 10
    assert len(oracles.monotone_tables(2, [[True, True], [False, True]], 2)) == 6


# --- width and height ------------------------------------------------------

@pytest.mark.parametrize("name", sorted(WIDTH_HEIGHT))
def test_width_height(name):
    L = SUITE[name]
    w, h = WIDTH_HEIGHT[name]
    a = max_antichain(L.poset)
    assert len(a) == w and is_antichain(L.poset, a)
    cover = min_chain_cover(L.poset)
    assert len(cover) == w
    assert sorted(x for c in cover for x in c) == list(range(L.n))
    assert all(is_chain(L.poset, c) for c in cover)
    c = longest_chain(L.poset)
    assert len(c) == h and is_chain(L.poset, c)
    assert len(mirsky_layers(L.poset)) == h


def test_m3_antichain_is_atoms():
    assert max_antichain(make_mn(3).poset) == [1, 2, 3]
    assert longest_chain(make_mn(3).poset) == [0, 1, 4]


def test_chain_width_one():
    for n in range(1, 7):
        assert len(max_antichain(chain(n).poset)) == 1
    assert longest_chain(chain(3).poset) == [0, 1, 2]


def test_example1_widths():
    L = make_example(1, [2, 3, 4])
    assert L.n == 11
    assert len(max_antichain(L)) == 3
    assert len(longest_chain(L)) == 6
    assert len(min_chain_cover(L)) == 3


def test_koenig_duality_against_subset_scan(rng):
    for _ in range(150):
        n = int(rng.integers(1, 9))
        P = random_poset(n, rng)
        leq = P.leq.tolist()
        w = oracles.max_antichain_size(n, leq)
        assert len(max_antichain(P)) == w
        assert len(min_chain_cover(P)) == oracles.min_chain_cover_size(n, leq) == w
        assert len(longest_chain(P)) == oracles.longest_chain_length(n, leq)


def test_mirsky_layers_partition(rng):
    for _ in range(50):
        P = random_poset(int(rng.integers(1, 12)), rng)
        layers = mirsky_layers(P)
        assert sorted(x for layer in layers for x in layer) == list(range(P.n))
        assert all(is_antichain(P, layer) for layer in layers)
        assert len(layers) == len(longest_chain(P))


def test_heights_minimal_elements():
    h = heights(make_mn(3).poset)
    assert h.tolist() == [1, 2, 2, 2, 3]


# --- ramsey ---------------------------------------------------------------

def test_ramsey_antichain_only():
    w = ramsey_witness(antichain_poset(9), 3, 3)
    assert w.kind == "antichain" and len(w.elements) == 3


def test_ramsey_chain_only():
    w = ramsey_witness(chain(9).poset, 3, 3)
    assert w.kind == "chain" and w.elements == (0, 1, 2)


def test_ramsey_too_small():
    with pytest.raises(TooSmall) as e:
        ramsey_witness(chain(4).poset, 3, 3)
    assert e.value.details["required"] == 5


def test_ramsey_dual_mode():
    w = ramsey_witness(chain(5).poset, 3, 3, dual=True)
    assert w.kind == "dual-chain"
    assert all(chain(5).leq[b, a] for a, b in zip(w.elements, w.elements[1:]))


def test_ramsey_five_element_posets(rng):
    for _ in range(200):
        P = random_poset(5, rng)
        w = ramsey_witness(P, 3, 3)
        if w.kind == "chain":
            assert len(w.elements) >= 3 and is_chain(P, w.elements)
        else:
            assert len(w.elements) >= 3 and is_antichain(P, w.elements)


# --- function tables --------------------------------------------------------

def test_function_table_validation():
    L = chain(3)
    with pytest.raises(ArityMismatch):
        FunctionTable(L, 1, [0, 1])
    with pytest.raises(ValueError):
        FunctionTable(L, 1, [0, 1, 3])
    with pytest.raises(ValueError):
        FunctionTable.total(L, 1, [0, UNDEFINED, 1])
    f = FunctionTable.from_points(L, 2, {(0, 1): 2, (2, 2): 1})
    assert f(0, 1) == 2 and not f.is_total
    assert f.domain.tolist() == [1, 8]
    with pytest.raises(KeyError):
        f(1, 1)
    with pytest.raises(ValueError):
        FunctionTable.from_points(L, 1, [((0,), 1), ((0,), 2)])


def test_compare_functions():
    L = chain(3)
    bottom = FunctionTable(L, 1, [0, 0, 0])
    ident = FunctionTable(L, 1, [0, 1, 2])
    assert compare_functions(bottom, ident) == "less"
    assert compare_functions(ident, bottom) == "greater"
    assert compare_functions(ident, ident) == "equal"
    M3 = make_mn(3)
    f = FunctionTable.from_callable(M3, 1, lambda x: int(M3.join[x, 1]))
    g = FunctionTable.from_callable(M3, 1, lambda x: int(M3.join[x, 2]))
    assert compare_functions(f, g) == "incomparable"
    with pytest.raises(ArityMismatch):
        compare_functions(f, FunctionTable(M3, 2, np.zeros(25, dtype=int)))


def test_check_monotone():
    for L in SUITE.values():
        assert check_monotone(FunctionTable(L, 1, np.arange(L.n)))[0]
    f = FunctionTable.from_points(chain(3), 1, {(0,): 1, (1,): 0})
    assert check_monotone(f) == (False, ((0,), (1,)))
    B2 = make_boolean(2).lattice
    swap = FunctionTable(B2, 1, [0, 2, 1, 3])
    assert check_monotone(swap) == (True, None)


def test_enumeration_counts():
    assert count_monotone(chain(2), 1) == 3
    assert count_monotone(chain(3), 1) == 10
    assert count_monotone(chain(2), 2) == 6


@pytest.mark.parametrize("name", sorted(UNARY_MONOTONE))
def test_unary_counts_frozen(name):
    assert count_monotone(SUITE[name], 1) == UNARY_MONOTONE[name]


@pytest.mark.parametrize("name", sorted(BINARY_MONOTONE))
def test_binary_counts_frozen(name):
    assert count_monotone(SUITE[name], 2) == BINARY_MONOTONE[name]


def test_enumeration_matches_oracle_set():
    for L, k in [(chain(2), 1), (chain(2), 2), (chain(3), 1), (make_mn(3), 1), (SUITE["n5"], 1), (chain(3), 2)]:
        n, leq, _, _ = plain(L)
        got = [tuple(f.values.tolist()) for f in enumerate_monotone(L, k)]
        assert len(got) == len(set(got))
        assert set(got) == set(oracles.monotone_tables(n, leq, k))


def test_enumeration_order_is_canonical():
    got = [f.values.tolist() for f in enumerate_monotone(chain(2), 1)]
    assert got == [[0, 0], [0, 1], [1, 1]]
    assert len(list(enumerate_monotone(chain(3), 1, limit=4))) == 4


def test_linear_extension_respects_order():
    L = make_mn(3)
    order = linear_extension(L, 2).tolist()
    pos = {t: i for i, t in enumerate(order)}
    rel = L.tuple_leq(2)
    for a, b in zip(*np.nonzero(rel)):
        assert pos[a] <= pos[b]


def test_count_budget():
    with pytest.raises(BudgetExceeded):
        count_monotone(make_mn(3), 1, limit=100)
    assert count_monotone(make_mn(3), 1, limit=178) == 178


# --- extension --------------------------------------------------------------

def test_extend_m3_single_point():
    M3 = make_mn(3)
    g = extend_partial(FunctionTable.from_points(M3, 1, {(1,): 4}))
    assert g.values.tolist() == [0, 4, 0, 0, 4]


def test_extend_total_is_identity():
    for f in enumerate_monotone(make_mn(3), 1, limit=30):
        assert extend_partial(f) == f


def test_extend_bottom_point():
    L = chain(4)
    g = extend_partial(FunctionTable.from_points(L, 1, {(0,): 0}))
    assert g.values.tolist() == [0, 0, 0, 0]


def test_extend_rejects_non_monotone():
    f = FunctionTable.from_points(chain(3), 1, {(0,): 2, (2,): 0})
    with pytest.raises(NotMonotoneOnDomain) as e:
        extend_partial(f)
    assert e.value.details["pair"] == ((0,), (2,))


def test_extend_is_least(rng):
    L = SUITE["n5"]
    totals = [f.values for f in enumerate_monotone(L, 1)]
    for _ in range(40):
        base = totals[rng.integers(len(totals))]
        dom = np.flatnonzero(rng.random(L.n) < 0.5)
        vals = np.full(L.n, UNDEFINED)
        vals[dom] = base[dom]
        g = extend_partial(FunctionTable(L, 1, vals))
        exts = [t for t in totals if np.array_equal(t[dom], base[dom])]
        assert np.array_equal(g.values[dom], base[dom])
        assert all(L.leq[g.values, t].all() for t in exts)
        assert any(np.array_equal(g.values, t) for t in exts)


# --- sperner -------------------------------------------------------------

def test_sperner_m4():
    fam = sperner_family(make_mn(4), [1, 2, 3, 4])
    assert len(fam) == comb(4, 2) == 6
    for f, g in itertools.combinations(fam, 2):
        assert compare_functions(f, g) == "incomparable"


def test_sperner_two_atoms():
    M3 = make_mn(3)
    fa, fb = sperner_family(M3, [1, 2])
    assert fa.values.tolist() == [0, 4, 0, 0, 4]
    assert fb.values.tolist() == [0, 0, 4, 0, 4]
    assert compare_functions(fa, fb) == "incomparable"


def test_sperner_singleton_uses_lower_middle_layer():
    # floor(1/2) = 0: the one member is the indicator of the empty subset
    fam = sperner_family(chain(3), [1])
    assert len(fam) == 1 and fam[0].values.tolist() == [0, 0, 0]


def test_sperner_requires_antichain():
    with pytest.raises(NotAnAntichain):
        sperner_family(chain(3), [0, 1])


@pytest.mark.parametrize("name", sorted(SUITE))
def test_sperner_monotone_incomparable(name):
    L = SUITE[name]
    A = max_antichain(L)
    fam = sperner_family(L, A)
    assert len(fam) == comb(len(A), len(A) // 2)
    assert all(check_monotone(f)[0] for f in fam)
    for f, g in itertools.combinations(fam, 2):
        assert compare_functions(f, g) == "incomparable"


def test_antichain_and_chain_predicates():
    P = poset_from_leq(make_mn(3).leq)
    assert is_antichain(P, [1, 2, 3]) and not is_antichain(P, [0, 1])
    assert is_chain(P, [0, 2, 4]) and not is_chain(P, [1, 2])
