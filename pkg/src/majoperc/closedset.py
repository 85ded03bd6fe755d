"""Closed vertex sets.

A proper subset ``S`` of the vertices is closed when every vertex outside it
has strictly fewer than half of its neighbours in ``S``.  A run that does not
percolate stops exactly on a closed set, so an initial set percolates iff no
closed set contains it.
"""

from __future__ import annotations

import numba as nb
import numpy as np

from .graph import Graph, VertexSet

__all__ = ["is_closed", "enumerate_closed_masks", "enumerate_closed_sets", "MAX_ENUM_N"]

MAX_ENUM_N = 22


def is_closed(g: Graph, s: VertexSet) -> bool:
    if s.n != g.n:
        raise ValueError(f"vertex set is over [0, {s.n}) but graph has {g.n} vertices")
    if len(s) == g.n:
        return False
    owner = np.repeat(np.arange(g.n), g.degrees)
    inside = np.bincount(owner, weights=s.mask[g.indices], minlength=g.n).astype(np.int64)
    outside = ~s.mask
    return bool(np.all(2 * inside[outside] < g.degrees[outside]))


@nb.njit(cache=True)
def _closed_masks(n, indptr, indices, degrees):
    # Gray-code walk over all subsets; cnt[v] = |N(v) ∩ S| maintained incrementally
    cnt = np.zeros(n, dtype=np.int64)
    member = np.zeros(n, dtype=np.bool_)
    out = []
    full = (1 << n) - 1
    s = 0
    for i in range(1 << n):
        if i > 0:
            x = 0
            t = i
            while t & 1 == 0:
                t >>= 1
                x += 1
            s ^= 1 << x
            delta = 1 if not member[x] else -1
            member[x] = not member[x]
            for j in range(indptr[x], indptr[x + 1]):
                cnt[indices[j]] += delta
        if s == full:
            continue
        ok = True
        for v in range(n):
            if not member[v] and 2 * cnt[v] >= degrees[v]:
                ok = False
                break
        if ok:
            out.append(s)
    res = np.empty(len(out), dtype=np.int64)
    for k in range(len(out)):
        res[k] = out[k]
    res.sort()
    return res


def enumerate_closed_masks(g: Graph) -> np.ndarray:
    """Bitmasks (bit ``i`` = vertex ``i``) of all closed sets, ascending."""
    if g.n > MAX_ENUM_N:
        raise ValueError(f"closed-set enumeration is limited to n <= {MAX_ENUM_N}, got n={g.n}")
    return _closed_masks(g.n, g.indptr, g.indices, g.degrees)


def enumerate_closed_sets(g: Graph) -> list[VertexSet]:
    return [VertexSet.from_bits(g.n, int(b)) for b in enumerate_closed_masks(g)]
