"""Named example lattices and seeded random instances."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import BudgetExceeded
from .lattice import DEFAULT_MAX_TUPLES, Lattice, lattice_from_covers, lattice_from_leq, poset_from_leq, Poset
from .ortho import OrthoLattice, horizontal_sum, validate_ortho


@dataclass(frozen=True)
class GallerySpec:
    kind: str
    params: dict = field(default_factory=dict)

    def build(self):
        p = self.params
        if self.kind == "mn":
            return make_mn(p["atoms"])
        if self.kind in ("example1", "example2", "example3"):
            return make_example(int(self.kind[-1]), p["blocks"])
        if self.kind == "boolean":
            return make_boolean(p["atoms"])
        if self.kind == "random":
            return random_lattice(p["size"], p["seed"])
        raise ValueError(f"unknown gallery kind {self.kind!r}")


def make_mn(n: int) -> Lattice:
    """Bottom 0, atoms ``1..n``, top ``n + 1``."""
    if n < 1:
        raise ValueError("need at least one atom")
    top = n + 1
    return lattice_from_covers(n + 2, [(0, a) for a in range(1, top)] + [(a, top) for a in range(1, top)])


def _check_blocks(blocks: Sequence[int]) -> list[int]:
    blocks = [int(b) for b in blocks]
    if not blocks or min(blocks) < 1:
        raise ValueError("blocks must be a nonempty list of positive sizes")
    return blocks


def example_layout(kind: int, blocks: Sequence[int]) -> dict:
    """Element ids used by :func:`make_example`.

    Keys: ``n``, ``bottom``, ``top``, ``blocks`` (ids per block, in the order
    given) and, for kind 2, ``separators`` between consecutive blocks.
    """
    blocks = _check_blocks(blocks)
    ids: list[list[int]] = []
    seps: list[int] = []
    nxt = 1
    for i, size in enumerate(blocks):
        ids.append(list(range(nxt, nxt + size)))
        nxt += size
        if kind == 2 and i + 1 < len(blocks):
            seps.append(nxt)
            nxt += 1
    return {"n": nxt + 1, "bottom": 0, "top": nxt, "blocks": ids, "separators": seps}


def make_example(kind: int, blocks: Sequence[int]) -> Lattice:
    """Finite analogues of three classic examples.

    kind 1: chains side by side between fresh bounds.
    kind 2: antichain blocks stacked, a single separator between neighbours.
    kind 3: the blocks glued into one chain, later blocks below earlier ones.
    """
    if kind not in (1, 2, 3):
        raise ValueError("kind must be 1, 2 or 3")
    lay = example_layout(kind, blocks)
    bot, top, ids = lay["bottom"], lay["top"], lay["blocks"]
    covers = []
    if kind == 1:
        for chain_ids in ids:
            seq = [bot] + chain_ids + [top]
            covers += list(zip(seq, seq[1:]))
    elif kind == 2:
        levels = [[bot]]
        for i, block in enumerate(ids):
            levels.append(block)
            if i < len(lay["separators"]):
                levels.append([lay["separators"][i]])
        levels.append([top])
        for lo, hi in zip(levels, levels[1:]):
            covers += [(a, b) for a in lo for b in hi]
    else:
        seq = [bot] + [x for block in reversed(ids) for x in block] + [top]
        covers = list(zip(seq, seq[1:]))
    return lattice_from_covers(lay["n"], covers)


def block_endomap_count(blocks: Sequence[int]) -> int:
    return math.prod(s**s for s in _check_blocks(blocks))


def block_endomaps(blocks: Sequence[int]) -> Iterator[np.ndarray]:
    """All self-maps of a kind-2 example fixing bounds and separators and
    sending every antichain block into itself."""
    lay = example_layout(2, blocks)
    base = np.arange(lay["n"], dtype=np.intp)
    per_block = [itertools.product(b, repeat=len(b)) for b in lay["blocks"]]
    for choice in itertools.product(*[list(p) for p in per_block]):
        f = base.copy()
        for block, img in zip(lay["blocks"], choice):
            f[block] = img
        yield f


def random_block_endomap(blocks: Sequence[int], rng: np.random.Generator) -> np.ndarray:
    lay = example_layout(2, blocks)
    f = np.arange(lay["n"], dtype=np.intp)
    for block in lay["blocks"]:
        f[block] = rng.choice(block, size=len(block))
    return f


def make_boolean(m: int, max_elements: int = DEFAULT_MAX_TUPLES) -> OrthoLattice:
    """Power set of ``m`` atoms; element id is the bitmask, perp is complement."""
    if m < 0:
        raise ValueError("atom count must be nonnegative")
    if 2**m > max_elements:
        raise BudgetExceeded(f"boolean lattice with {2**m} elements exceeds {max_elements}", limit=max_elements)
    if m == 0:
        raise ValueError("the one-element lattice is not supported")
    x = np.arange(2**m)
    leq = (x[:, None] & ~x[None, :]) == 0
    return validate_ortho(lattice_from_leq(leq), (2**m - 1) ^ x)


def make_mo2() -> OrthoLattice:
    """Horizontal sum of two Boolean squares (six elements)."""
    B = make_boolean(2)
    return horizontal_sum(B, B)[0]


def make_mo3() -> OrthoLattice:
    """Three four-element Boolean blocks glued at the bounds (eight elements)."""
    return horizontal_sum(make_mo2(), make_boolean(2))[0]


def _closure(sets: list[int], full: int):
    """Intersection closure of a family of bitmasks, with ``full`` included."""
    fam = {full}
    frontier = set(sets) - fam
    while frontier:
        fam |= frontier
        new = {a & b for a in frontier for b in fam} - fam
        frontier = new
    return fam


def random_lattice(n: int, seed: int) -> Lattice:
    """A seeded closure system with exactly ``n`` members, ordered by inclusion.

    Ground set size is ``ceil(log2 n) + 1``.  Random subsets are offered in
    turn; one is kept when the closure still fits, and otherwise the closure
    is grown by a single set instead, which is always possible: an
    inclusion-minimal new set of that closure adds exactly one member.
    """
    if n < 2:
        raise ValueError("need at least two elements")
    rng = np.random.default_rng(seed)
    m = max(1, math.ceil(math.log2(n))) + 1
    full = (1 << m) - 1
    fam = {full}
    while len(fam) < n:
        s = int(rng.integers(0, full))
        if s in fam:
            continue
        grown = _closure(list(fam) + [s], full)
        if len(grown) <= n:
            fam = grown
            continue
        # an inclusion-minimal new set meets every member in itself or a member
        c = min(grown - fam, key=lambda v: (bin(v).count("1"), v))
        fam = fam | {c}
    members = sorted(fam, key=lambda v: (bin(v).count("1"), v))
    a = np.asarray(members)
    leq = (a[:, None] & ~a[None, :]) == 0
    return lattice_from_leq(leq)


def random_poset(n: int, rng: np.random.Generator, density: float | None = None) -> Poset:
    """Random order from a random DAG on a shuffled labelling."""
    p = rng.uniform(0.1, 0.6) if density is None else density
    upper = np.triu(rng.random((n, n)) < p, 1)
    perm = rng.permutation(n)
    rel = np.zeros((n, n), dtype=bool)
    rel[np.ix_(perm, perm)] = upper
    leq = rel | np.eye(n, dtype=bool)
    for k in range(n):
        leq |= leq[:, k:k + 1] & leq[k:k + 1, :]
    return poset_from_leq(leq)
