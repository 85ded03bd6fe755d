"""Erdős–Rényi graphs in a compressed sparse row layout.

Vertices are the integers ``0 .. n-1``.  Each vertex's neighbours live in a
contiguous, sorted slice of one shared ``indices`` array, delimited by
``indptr``.  Graphs are immutable once built and may be shared freely between
threads.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Iterable

import numba as nb
import numpy as np

from .rng import make_rng

__all__ = [
    "Graph",
    "VertexSet",
    "sample_gnp",
    "sample_gnp_naive",
    "set_edge_counts",
    "min_degree",
    "pair_count",
    "pair_index_to_edge",
    "dump_edge_list",
    "load_edge_list",
]


class VertexSet:
    """A subset of ``{0, ..., n-1}`` held both as a sorted element array and
    as a boolean indicator."""

    __slots__ = ("n", "elements", "mask")

    def __init__(self, n: int, elements: Iterable[int] = ()):
        elems = np.unique(np.asarray(list(elements) if not isinstance(elements, np.ndarray) else elements,
                                     dtype=np.int64))
        if elems.size and (elems[0] < 0 or elems[-1] >= n):
            raise ValueError(f"vertex set elements must lie in [0, {n})")
        mask = np.zeros(n, dtype=np.bool_)
        mask[elems] = True
        self._init(n, elems, mask)

    def _init(self, n, elements, mask):
        self.n = int(n)
        self.elements = elements
        self.mask = mask
        self.elements.flags.writeable = False
        self.mask.flags.writeable = False

    @classmethod
    def from_mask(cls, mask) -> "VertexSet":
        mask = np.array(mask, dtype=np.bool_, copy=True)
        obj = cls.__new__(cls)
        obj._init(mask.size, np.flatnonzero(mask).astype(np.int64), mask)
        return obj

    @classmethod
    def from_bits(cls, n: int, bits: int) -> "VertexSet":
        """Set whose members are the 1-bits of ``bits`` (bit ``i`` is vertex ``i``)."""
        return cls(n, [i for i in range(n) if bits >> i & 1])

    @classmethod
    def first(cls, n: int, m: int) -> "VertexSet":
        """The set ``{0, ..., m-1}``."""
        if not 0 <= m <= n:
            raise ValueError(f"m={m} outside [0, {n}]")
        mask = np.zeros(n, dtype=np.bool_)
        mask[:m] = True
        return cls.from_mask(mask)

    @classmethod
    def empty(cls, n: int) -> "VertexSet":
        return cls.first(n, 0)

    @classmethod
    def full(cls, n: int) -> "VertexSet":
        return cls.first(n, n)

    def to_bits(self) -> int:
        return sum(1 << int(v) for v in self.elements)

    def issubset(self, other: "VertexSet") -> bool:
        return self.n == other.n and bool(np.all(other.mask[self.elements]))

    def __len__(self) -> int:
        return int(self.elements.size)

    def __iter__(self):
        return iter(self.elements.tolist())

    def __contains__(self, v) -> bool:
        return 0 <= v < self.n and bool(self.mask[v])

    def __eq__(self, other) -> bool:
        if not isinstance(other, VertexSet):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.elements, other.elements)

    def __hash__(self):
        return hash((self.n, self.elements.tobytes()))

    def __repr__(self) -> str:
        if len(self) <= 12:
            return f"VertexSet(n={self.n}, {self.elements.tolist()})"
        return f"VertexSet(n={self.n}, size={len(self)})"


@nb.njit(cache=True, nogil=True)
def _csr_from_sorted_edges(n, u, v):
    # u < v and (u, v) lexicographically sorted: every neighbour slice comes out sorted
    deg = np.zeros(n, dtype=np.int64)
    for e in range(u.size):
        deg[u[e]] += 1
        deg[v[e]] += 1
    indptr = np.zeros(n + 1, dtype=np.int64)
    for i in range(n):
        indptr[i + 1] = indptr[i] + deg[i]
    pos = indptr[:-1].copy()
    indices = np.empty(indptr[n], dtype=np.int32)
    for e in range(u.size):
        a = u[e]
        b = v[e]
        indices[pos[a]] = b
        pos[a] += 1
        indices[pos[b]] = a
        pos[b] += 1
    return indptr, indices


class Graph:
    """Immutable simple undirected graph.

    ``p`` records the edge probability the graph was sampled with, or ``None``
    for graphs built by hand or loaded from disk.
    """

    __slots__ = ("n", "indptr", "indices", "degrees", "edge_count", "p")

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray, p: float | None = None):
        self.n = int(n)
        self.indptr = indptr
        self.indices = indices
        self.degrees = np.diff(indptr)
        self.edge_count = int(indices.size // 2)
        self.p = p
        for arr in (self.indptr, self.indices, self.degrees):
            arr.flags.writeable = False

    @classmethod
    def from_edges(cls, n: int, edges, p: float | None = None) -> "Graph":
        """Build from an iterable of ``(u, v)`` pairs in any order or orientation."""
        if n < 1:
            raise ValueError("a graph needs at least one vertex")
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        arr = arr.reshape(-1, 2)
        u = np.minimum(arr[:, 0], arr[:, 1])
        v = np.maximum(arr[:, 0], arr[:, 1])
        if u.size:
            if u.min() < 0 or v.max() >= n:
                raise ValueError(f"edge endpoint outside [0, {n})")
            if np.any(u == v):
                raise ValueError("self-loops are not allowed")
        order = np.lexsort((v, u))
        u, v = u[order], v[order]
        if u.size > 1 and np.any((u[1:] == u[:-1]) & (v[1:] == v[:-1])):
            raise ValueError("duplicate edges are not allowed")
        return cls._from_sorted(n, u, v, p)

    @classmethod
    def _from_sorted(cls, n, u, v, p=None) -> "Graph":
        indptr, indices = _csr_from_sorted_edges(n, u.astype(np.int32, copy=False), v.astype(np.int32, copy=False))
        return cls(n, indptr, indices, p)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        iu, iv = np.triu_indices(n, 1)
        return cls._from_sorted(n, iu, iv, 1.0)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        z = np.zeros(0, dtype=np.int64)
        return cls._from_sorted(n, z, z, 0.0)

    def adjacency(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Edge endpoints ``(u, v)`` with ``u < v``, lexicographically sorted."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        keep = self.indices > src
        return src[keep], self.indices[keep].astype(np.int64)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edge_count}, p={self.p})"


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def pair_index_to_edge(n: int, idx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Invert the lexicographic linearisation of the pairs ``u < v``.

    Pair ``(u, v)`` has index ``u*(2n-u-1)/2 + (v-u-1)``.
    """
    idx = np.asarray(idx, dtype=np.int64)
    b = 2 * n - 1
    u = np.floor((b - np.sqrt(float(b) * b - 8.0 * idx)) / 2).astype(np.int64)
    u = np.clip(u, 0, n - 2)

    def offset(x):
        return x * (2 * n - x - 1) // 2

    # float rounding can leave u off by one in either direction
    u = np.where(offset(u) > idx, u - 1, u)
    u = np.where(offset(u + 1) <= idx, u + 1, u)
    v = idx - offset(u) + u + 1
    return u, v


def _check_params(n, p):
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise ValueError(f"p must lie in [0, 1], got {p}")


@nb.njit(cache=True, nogil=True)
def _gap_walk(n, total, log_q, unif, pos, u, base):
    # consume uniforms on (0, 1]; pos is the last emitted pair index, base the
    # index of the first pair in row u
    out_u = np.empty(unif.size, dtype=np.int32)
    out_v = np.empty(unif.size, dtype=np.int32)
    count = 0
    done = False
    for i in range(unif.size):
        skip = np.floor(np.log(unif[i]) / log_q)
        if skip >= total - 1 - pos:
            done = True
            break
        pos += np.int64(skip) + 1
        while pos >= base + (n - u - 1):
            base += n - u - 1
            u += 1
        out_u[count] = u
        out_v[count] = pos - base + u + 1
        count += 1
    return out_u[:count], out_v[:count], pos, u, base, done


def sample_gnp(n: int, p: float, seed: int) -> Graph:
    """Sample G(n, p) by geometric gap skipping over the lexicographic pair order.

    From the current pair index the next present edge lies
    ``floor(log(U) / log(1-p))`` pairs further on, ``U`` uniform on ``(0, 1]``.
    Uniforms come from ``PCG64(seed)`` in blocks; expected cost is
    O(n + edges).
    """
    _check_params(n, p)
    total = pair_count(n)
    if p == 0.0 or total == 0:
        nothing = np.zeros(0, dtype=np.int64)
        return Graph._from_sorted(n, nothing, nothing, p)
    if p == 1.0:
        return Graph.complete(n)

    rng = make_rng(seed)
    log_q = math.log1p(-p)
    mean = total * p
    block = int(mean + 6.0 * math.sqrt(mean) + 64)
    us, vs = [], []
    pos, u, base = -1, 0, 0
    while True:
        unif = 1.0 - rng.random(block)
        bu, bv, pos, u, base, done = _gap_walk(n, total, log_q, unif, pos, u, base)
        us.append(bu)
        vs.append(bv)
        if done:
            break
        block = max(64, block // 4)
    if len(us) == 1:
        return Graph._from_sorted(n, us[0], vs[0], p)
    return Graph._from_sorted(n, np.concatenate(us), np.concatenate(vs), p)


def sample_gnp_naive(n: int, p: float, seed: int) -> Graph:
    """One Bernoulli(p) decision per pair, in lexicographic order.  O(n^2)."""
    _check_params(n, p)
    rng = make_rng(seed)
    present = rng.random(pair_count(n)) < p
    iu, iv = np.triu_indices(n, 1)
    return Graph._from_sorted(n, iu[present], iv[present], p)


@nb.njit(cache=True, nogil=True)
def _set_edge_counts(indptr, indices, elements, mask):
    inside = 0
    touching = 0
    for i in range(elements.size):
        v = elements[i]
        touching += indptr[v + 1] - indptr[v]
        for j in range(indptr[v], indptr[v + 1]):
            if mask[indices[j]]:
                inside += 1
    within = inside // 2
    return within, touching - 2 * within


def set_edge_counts(g: Graph, s: VertexSet) -> tuple[int, int]:
    """Return ``(within, boundary)``: edges with both, resp. exactly one,
    endpoint in ``s``."""
    if s.n != g.n:
        raise ValueError(f"vertex set is over [0, {s.n}) but graph has {g.n} vertices")
    within, boundary = _set_edge_counts(g.indptr, g.indices, s.elements, s.mask)
    return int(within), int(boundary)


def min_degree(g: Graph) -> int:
    return int(g.degrees.min())


def dump_edge_list(g: Graph, path) -> None:
    """Write ``n m`` then one sorted ``u v`` line per edge."""
    u, v = g.edges()
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"{g.n} {g.edge_count}\n")
        if u.size:
            body = np.empty(2 * u.size, dtype=np.int64)
            body[0::2] = u
            body[1::2] = v
            np.savetxt(fh, body.reshape(-1, 2), fmt="%d")


def load_edge_list(path) -> Graph:
    path = Path(path)
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: first line must be 'n m'")
        n, m = int(header[0]), int(header[1])
        data = np.array(fh.read().split(), dtype=np.int64)
    if data.size != 2 * m:
        raise ValueError(f"{path}: header promises {m} edges, found {data.size / 2:g}")
    pairs = data.reshape(-1, 2)
    if m and np.any(pairs[:, 0] >= pairs[:, 1]):
        raise ValueError(f"{path}: every edge line must have u < v")
    return Graph.from_edges(n, pairs)
