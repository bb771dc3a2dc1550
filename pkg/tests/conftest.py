import numpy as np
import pytest

from latticelab.gallery import make_boolean, make_example, make_mn
from latticelab.lattice import chain, lattice_from_covers


def n5():
    # 0 < p < q < 1 and 0 < r < 1 with r beside the two-element chain
    return lattice_from_covers(5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])


def curated_suite():
    return {
        "two": chain(2),
        "chain3": chain(3),
        "chain4": chain(4),
        "chain5": chain(5),
        "boolean2": make_boolean(2).lattice,
        "boolean3": make_boolean(3).lattice,
        "m3": make_mn(3),
        "m4": make_mn(4),
        "m5": make_mn(5),
        "n5": n5(),
        "example1_23": make_example(1, [2, 3]),
        "example2_32": make_example(2, [3, 2]),
        "example3_22": make_example(3, [2, 2]),
    }


SUITE = curated_suite()
OPC_TRUE = {"two", "m3", "m4", "m5"}


def plain(L):
    """``(n, leq, meet, join)`` as nested Python lists for the oracles."""
    return L.n, L.leq.tolist(), L.meet.tolist(), L.join.tolist()


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)
