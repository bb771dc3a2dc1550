"""Compiled inner loops for clone closure.

Each kernel walks candidates in the canonical order (frontier member ``j``
ascending, partner ``i = 0..j``, join before meet) and appends the first
occurrence of every unseen table.  Kernels stop early when the output buffer
is full or the budget is hit and report where to resume.
"""
import numpy as np
from numba import njit

DONE, FULL, BUDGET = 0, 1, 2


@njit(cache=True)
def _present(key, dense, use_dense, seen):
    if use_dense:
        return dense[key] >= 0
    return key in seen


@njit(cache=True)
def _mark(key, idx, dense, use_dense, seen):
    if use_dense:
        dense[key] = idx
    else:
        seen[key] = idx


@njit(cache=True)
def pair_closure(tables, size, start, stop, j0, i0, op0, join, meet, weights,
                 dense, use_dense, seen, max_size, derivs, everything):
    """Returns ``(status, size, j, i, op)``; resume from ``(j, i, op)`` on FULL.

    Stops early with DONE once ``size`` reaches ``everything`` (all tables).
    """
    width = tables.shape[1]
    cap = tables.shape[0]
    buf = np.empty(width, dtype=tables.dtype)
    for j in range(j0, stop):
        first_i = i0 if j == j0 else 0
        for i in range(first_i, j + 1):
            first_op = op0 if (j == j0 and i == i0) else 0
            for op in range(first_op, 2):
                key = 0
                if op == 0:
                    for d in range(width):
                        v = join[tables[i, d], tables[j, d]]
                        buf[d] = v
                        key += np.int64(v) * weights[d]
                else:
                    for d in range(width):
                        v = meet[tables[i, d], tables[j, d]]
                        buf[d] = v
                        key += np.int64(v) * weights[d]
                if _present(key, dense, use_dense, seen):
                    continue
                if size >= max_size:
                    return BUDGET, size, j, i, op
                if size >= cap:
                    return FULL, size, j, i, op
                for d in range(width):
                    tables[size, d] = buf[d]
                derivs[size, 0] = op
                derivs[size, 1] = i
                derivs[size, 2] = j
                _mark(key, size, dense, use_dense, seen)
                size += 1
                if size == everything:
                    return DONE, size, stop, 0, 0
    return DONE, size, stop, 0, 0


@njit(cache=True)
def unary_closure(tables, size, start, stop, j0, perp, weights,
                  dense, use_dense, seen, max_size, derivs, everything):
    width = tables.shape[1]
    cap = tables.shape[0]
    buf = np.empty(width, dtype=tables.dtype)
    for j in range(j0, stop):
        key = 0
        for d in range(width):
            v = perp[tables[j, d]]
            buf[d] = v
            key += np.int64(v) * weights[d]
        if _present(key, dense, use_dense, seen):
            continue
        if size >= max_size:
            return BUDGET, size, j
        if size >= cap:
            return FULL, size, j
        for d in range(width):
            tables[size, d] = buf[d]
        derivs[size, 0] = 2
        derivs[size, 1] = j
        derivs[size, 2] = j
        _mark(key, size, dense, use_dense, seen)
        size += 1
        if size == everything:
            return DONE, size, stop
    return DONE, size, stop


# --- hashed variants for rows too wide to pack into one integer ------------

@njit(cache=True)
def row_hash(row):
    h = np.int64(-3750763034362895579)
    for d in range(row.shape[0]):
        h = (h ^ np.int64(row[d])) * np.int64(1099511628211)
    return h ^ (h >> np.int64(29))


@njit(cache=True)
def _probe(tables, slots, row, h):
    """Slot position holding ``row``, or the empty slot where it would go."""
    mask = slots.shape[0] - 1
    pos = h & mask
    width = row.shape[0]
    while True:
        idx = slots[pos]
        if idx < 0:
            return pos
        same = True
        for d in range(width):
            if tables[idx, d] != row[d]:
                same = False
                break
        if same:
            return pos
        pos = (pos + 1) & mask


@njit(cache=True)
def hashed_lookup(tables, slots, row):
    return slots[_probe(tables, slots, row, row_hash(row))]


@njit(cache=True)
def hashed_insert(tables, slots, hashes, idx):
    h = row_hash(tables[idx])
    hashes[idx] = h
    slots[_probe(tables, slots, tables[idx], h)] = idx


@njit(cache=True)
def rehash(tables, slots, hashes, size):
    mask = slots.shape[0] - 1
    for idx in range(size):
        pos = hashes[idx] & mask
        while slots[pos] >= 0:
            pos = (pos + 1) & mask
        slots[pos] = idx


@njit(cache=True)
def pair_closure_hashed(tables, size, start, stop, j0, i0, op0, join, meet,
                        slots, hashes, max_size, derivs, cap, everything):
    """As :func:`pair_closure`; ``cap`` bounds members before a table resize."""
    width = tables.shape[1]
    buf = np.empty(width, dtype=tables.dtype)
    for j in range(j0, stop):
        first_i = i0 if j == j0 else 0
        for i in range(first_i, j + 1):
            first_op = op0 if (j == j0 and i == i0) else 0
            for op in range(first_op, 2):
                if op == 0:
                    for d in range(width):
                        buf[d] = join[tables[i, d], tables[j, d]]
                else:
                    for d in range(width):
                        buf[d] = meet[tables[i, d], tables[j, d]]
                h = row_hash(buf)
                pos = _probe(tables, slots, buf, h)
                if slots[pos] >= 0:
                    continue
                if size >= max_size:
                    return BUDGET, size, j, i, op
                if size >= cap:
                    return FULL, size, j, i, op
                for d in range(width):
                    tables[size, d] = buf[d]
                derivs[size, 0] = op
                derivs[size, 1] = i
                derivs[size, 2] = j
                hashes[size] = h
                slots[pos] = size
                size += 1
                if size == everything:
                    return DONE, size, stop, 0, 0
    return DONE, size, stop, 0, 0


@njit(cache=True)
def unary_closure_hashed(tables, size, start, stop, j0, perp, slots, hashes,
                         max_size, derivs, cap, everything):
    width = tables.shape[1]
    buf = np.empty(width, dtype=tables.dtype)
    for j in range(j0, stop):
        for d in range(width):
            buf[d] = perp[tables[j, d]]
        h = row_hash(buf)
        pos = _probe(tables, slots, buf, h)
        if slots[pos] >= 0:
            continue
        if size >= max_size:
            return BUDGET, size, j
        if size >= cap:
            return FULL, size, j
        for d in range(width):
            tables[size, d] = buf[d]
        derivs[size, 0] = 2
        derivs[size, 1] = j
        derivs[size, 2] = j
        hashes[size] = h
        slots[pos] = size
        size += 1
        if size == everything:
            return DONE, size, stop
    return DONE, size, stop
