"""Slow, direct reference implementations used to cross-check the package.

Everything here works on plain Python lists and an order matrix given as
nested lists of bools.  None of it imports the package under test.
"""
from __future__ import annotations

import itertools


def leq_from_covers(n, covers):
    leq = [[i == j for j in range(n)] for i in range(n)]
    for a, b in covers:
        leq[a][b] = True
    for k in range(n):
        for i in range(n):
            if leq[i][k]:
                for j in range(n):
                    if leq[k][j]:
                        leq[i][j] = True
    return leq


def bounds(n, leq):
    """glb and lub tables by scanning; ``None`` where not unique."""
    glb = [[None] * n for _ in range(n)]
    lub = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            lower = [c for c in range(n) if leq[c][a] and leq[c][b]]
            g = [c for c in lower if all(leq[d][c] for d in lower)]
            glb[a][b] = g[0] if len(g) == 1 else None
            upper = [c for c in range(n) if leq[a][c] and leq[b][c]]
            u = [c for c in upper if all(leq[c][d] for d in upper)]
            lub[a][b] = u[0] if len(u) == 1 else None
    return glb, lub


def tuples(n, k):
    return list(itertools.product(range(n), repeat=k))


def tuple_leq(leq, a, b):
    return all(leq[x][y] for x, y in zip(a, b))


def monotone(n, leq, k, values, domain=None):
    pts = tuples(n, k)
    idx = range(len(pts)) if domain is None else domain
    for i in idx:
        for j in idx:
            if tuple_leq(leq, pts[i], pts[j]) and not leq[values[i]][values[j]]:
                return False
    return True


def monotone_tables(n, leq, k):
    """Every monotone table, by filtering all n^(n^k) candidates."""
    return [v for v in itertools.product(range(n), repeat=n**k) if monotone(n, leq, k, v)]


def clone(n, join, meet, k, rows=None, perp=None):
    """Polynomial functions as a set of tuples, iterated to a fixpoint."""
    pts = tuples(n, k)
    rows = list(range(len(pts))) if rows is None else list(rows)
    gens = {tuple(pts[r][i] for r in rows) for i in range(k)}
    gens |= {tuple(c for _ in rows) for c in range(n)}
    fam = set(gens)
    while True:
        new = set()
        for f in fam:
            if perp is not None:
                new.add(tuple(perp[x] for x in f))
            for g in fam:
                new.add(tuple(join[x][y] for x, y in zip(f, g)))
                new.add(tuple(meet[x][y] for x, y in zip(f, g)))
        if new <= fam:
            return fam
        fam |= new


def set_partitions(n):
    """Restricted growth strings of length n."""
    def rec(prefix, m):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for b in range(m + 1):
            yield from rec(prefix + [b], max(m, b + 1))

    yield from rec([], 0)


def congruences(n, join, meet):
    out = []
    for labels in set_partitions(n):
        ok = True
        for a in range(n):
            for b in range(n):
                if labels[a] != labels[b]:
                    continue
                for c in range(n):
                    if labels[join[a][c]] != labels[join[b][c]] or labels[meet[a][c]] != labels[meet[b][c]]:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            out.append(labels)
    return out


def least_congruence(n, join, meet, pairs):
    cands = [p for p in congruences(n, join, meet) if all(p[a] == p[b] for a, b in pairs)]
    # the least one refines every other candidate
    for p in cands:
        if all(all(q[a] == q[b] for a in range(n) for b in range(n) if p[a] == p[b]) for q in cands):
            return p
    raise AssertionError("no least congruence")


def is_simple(n, join, meet):
    cs = congruences(n, join, meet)
    return len(cs) == 2 if n > 1 else False


def regressive_join_maps(n, leq, join):
    below = [[y for y in range(n) if leq[y][x]] for x in range(n)]
    out = []
    for f in itertools.product(*below):
        if all(f[join[a][b]] == join[f[a]][f[b]] for a in range(n) for b in range(n)):
            out.append(f)
    return out


def max_antichain_size(n, leq):
    best = 0
    for mask in range(1 << n):
        s = [i for i in range(n) if mask >> i & 1]
        if len(s) > best and all(not leq[a][b] for a in s for b in s if a != b):
            best = len(s)
    return best


def min_chain_cover_size(n, leq):
    best = n
    for labels in set_partitions(n):
        m = max(labels) + 1 if n else 0
        if m >= best:
            continue
        blocks = [[i for i in range(n) if labels[i] == b] for b in range(m)]
        if all(leq[a][b] or leq[b][a] for blk in blocks for a in blk for b in blk):
            best = m
    return best


def longest_chain_length(n, leq):
    h = [0] * n
    order = sorted(range(n), key=lambda x: sum(leq[y][x] for y in range(n)))
    for x in order:
        h[x] = 1 + max((h[y] for y in range(n) if y != x and leq[y][x]), default=0)
    return max(h, default=0)


def liminf(lub, glb, top, bottom, values):
    acc = bottom
    for k in range(len(values)):
        inf = top
        for v in values[k:]:
            inf = glb[inf][v]
        acc = lub[acc][inf]
    return acc


def is_ortho(n, leq, join, meet, perp, bottom, top):
    if any(perp[perp[x]] != x for x in range(n)):
        return False
    if any(join[x][perp[x]] != top or meet[x][perp[x]] != bottom for x in range(n)):
        return False
    return all(leq[perp[b]][perp[a]] for a in range(n) for b in range(n) if leq[a][b])


def isomorphic(n, leq1, leq2):
    return any(
        all(leq1[a][b] == leq2[p[a]][p[b]] for a in range(n) for b in range(n))
        for p in itertools.permutations(range(n))
    )
