"""Simple undirected graphs, G(n, p) sampling and breadth-first search.

A :class:`Graph` keeps two interchangeable views of one edge set:

* bit-packed adjacency rows, ``n`` rows of ``ceil(n / 64)`` little-endian
  64-bit words, bit ``v % 64`` of word ``v // 64`` in row ``u`` set iff
  ``{u, v}`` is an edge;
* a CSR neighbour list (sorted neighbours per vertex).

Either view is built lazily from the other. The bit rows are what BFS and
the all-pairs engine operate on; the CSR view lets sparse graphs with
hundreds of thousands of vertices exist without an ``n * n`` bit matrix.

Vertices are ``0 .. n-1``. Pairs ``u < v`` are linearised colexicographically,
``index(u, v) = v * (v - 1) / 2 + u``, which is also the order of
:attr:`Graph.edges` and of the edge-list file format.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as _scipy_components

from .errors import CapacityError, InputError
from .rng import MASK64, uniform_stream

#: Largest vertex count for which bit rows may be materialised (128 MiB).
BIT_ROWS_MAX_N = 1 << 15

UNREACHABLE = np.iinfo(np.int32).max
"""Sentinel in rows returned by :func:`bfs_distances`."""

_WORD = np.dtype("<u8")


def _words(n: int) -> int:
    return (n + 63) // 64


def bits_to_indices(words: np.ndarray) -> np.ndarray:
    """Positions of the set bits of a packed row, ascending."""
    return np.flatnonzero(np.unpackbits(words.view(np.uint8), bitorder="little"))


def _set_bits(rows: np.ndarray, a: np.ndarray, b: np.ndarray) -> None:
    bit = np.left_shift(np.uint64(1), (b & 63).astype(np.uint64))
    np.bitwise_or.at(rows, (a, b >> 6), bit)


class Graph:
    """Immutable simple undirected graph on ``0 .. n-1``.

    Build one with :meth:`from_edges`, :func:`gen_gnp` or the constructors in
    :mod:`hypgraph.families`.
    """

    __slots__ = ("_n", "_rows", "_indptr", "_indices", "_m")

    def __init__(self, n, *, rows=None, indptr=None, indices=None):
        if n < 1:
            raise InputError(f"graph needs at least one vertex, got n={n}")
        if rows is None and indptr is None:
            raise TypeError("need bit rows or a CSR neighbour list")
        self._n = int(n)
        self._rows = rows
        self._indptr = indptr
        self._indices = indices
        self._m = None
        for arr in (rows, indptr, indices):
            if arr is not None:
                arr.setflags(write=False)

    @classmethod
    def from_edges(cls, n, edges) -> Graph:
        """Graph on ``n`` vertices with the given edges (duplicates merged)."""
        e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        if e.size == 0:
            e = e.reshape(0, 2)
        if e.ndim != 2 or e.shape[1] != 2:
            raise InputError("edges must be pairs of vertices")
        if n < 1:
            raise InputError(f"graph needs at least one vertex, got n={n}")
        if e.size and (e.min() < 0 or e.max() >= n):
            raise InputError(f"edge endpoint out of range for n={n}")
        if np.any(e[:, 0] == e[:, 1]):
            raise InputError("self-loops are not allowed")
        u = np.minimum(e[:, 0], e[:, 1])
        v = np.maximum(e[:, 0], e[:, 1])
        key = np.unique(v * n + u)
        return cls._from_colex(n, key % n, key // n)

    @classmethod
    def _from_colex(cls, n, u, v) -> Graph:
        """Trusted constructor from colex-sorted, duplicate-free pairs u < v."""
        src = np.concatenate([u, v])
        dst = np.concatenate([v, u])
        order = np.lexsort((dst, src))
        indices = dst[order].astype(np.int32)
        counts = np.bincount(src, minlength=n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        g = cls(n, indptr=indptr, indices=indices)
        g._m = int(u.size)
        return g

    # -- views -------------------------------------------------------------

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        if self._m is None:
            if self._indptr is not None:
                self._m = int(self._indptr[-1]) // 2
            else:
                self._m = int(np.unpackbits(self._rows.view(np.uint8)).sum()) // 2
        return self._m

    @property
    def has_rows(self) -> bool:
        return self._rows is not None or self._n <= BIT_ROWS_MAX_N

    @property
    def rows(self) -> np.ndarray:
        """Bit-packed adjacency, shape ``(n, ceil(n/64))``, dtype ``<u8``."""
        if self._rows is None:
            if self._n > BIT_ROWS_MAX_N:
                raise CapacityError(
                    f"bit rows for n={self._n} exceed the cap of {BIT_ROWS_MAX_N} vertices"
                )
            rows = np.zeros((self._n, _words(self._n)), dtype=_WORD)
            src = np.repeat(np.arange(self._n), np.diff(self._indptr))
            _set_bits(rows, src, self._indices.astype(np.int64))
            rows.setflags(write=False)
            self._rows = rows
        return self._rows

    def _csr(self):
        if self._indptr is None:
            u, v = self._colex_from_rows()
            g = Graph._from_colex(self._n, u, v)
            self._indptr, self._indices = g._indptr, g._indices
        return self._indptr, self._indices

    @property
    def indptr(self) -> np.ndarray:
        return self._csr()[0]

    @property
    def indices(self) -> np.ndarray:
        return self._csr()[1]

    def _colex_from_rows(self, chunk: int = 1024):
        us, vs = [], []
        n = self._n
        for start in range(0, n, chunk):
            block = np.unpackbits(
                self._rows[start:start + chunk].view(np.uint8), axis=1, bitorder="little"
            )[:, :n]
            vv, uu = np.nonzero(np.tril(block, k=start - 1))
            vs.append(vv + start)
            us.append(uu)
        return np.concatenate(us).astype(np.int64), np.concatenate(vs).astype(np.int64)

    @property
    def edges(self) -> np.ndarray:
        """Edges as an ``(m, 2)`` array of ``(u, v)``, ``u < v``, colex order."""
        indptr, indices = self._csr()
        src = np.repeat(np.arange(self._n, dtype=np.int64), np.diff(indptr))
        dst = indices.astype(np.int64)
        keep = dst < src
        # CSR is sorted by (src, dst), which for src = v, dst = u < v is colex.
        return np.stack([dst[keep], src[keep]], axis=1)

    def neighbors(self, v: int) -> np.ndarray:
        indptr, indices = self._csr()
        return indices[indptr[v]:indptr[v + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self._csr()[0])

    def has_edge(self, u: int, v: int) -> bool:
        if self._rows is not None:
            return bool((int(self._rows[u, v >> 6]) >> (v & 63)) & 1)
        nb = self.neighbors(u)
        k = np.searchsorted(nb, v)
        return bool(k < nb.size and nb[k] == v)

    # -- identity ----------------------------------------------------------

    def fingerprint(self) -> str:
        h = hashlib.sha256(f"{self._n}:".encode())
        h.update(np.ascontiguousarray(self.edges, dtype="<i8").tobytes())
        return h.hexdigest()

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self.m == other.m and np.array_equal(self.edges, other.edges)

    __hash__ = None

    def __repr__(self):
        return f"Graph(n={self._n}, m={self.m})"


# -- generation --------------------------------------------------------------


@dataclass(frozen=True)
class GenSpec:
    n: int
    p: float
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise InputError(f"n must be a positive integer, got {self.n!r}")
        if not (0.0 <= self.p <= 1.0) or math.isnan(self.p):
            raise InputError(f"p must lie in [0, 1], got {self.p!r}")
        if not 0 <= self.seed <= MASK64:
            raise InputError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")

    @property
    def d(self) -> float:
        return self.p * (self.n - 1)


def skip_sample(total: int, p: float, seed: int) -> np.ndarray:
    """Indices in ``[0, total)`` kept independently with probability ``p``.

    Geometric skipping: gap ``floor(log(1 - U) / log(1 - p))`` between
    successive kept indices, with ``U`` read sequentially from the seeded
    uniform stream. The result depends only on the stream prefix, not on
    the internal batch size.
    """
    if p <= 0.0 or total == 0:
        return np.zeros(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(total, dtype=np.int64)
    stream = uniform_stream(seed)
    log_q = math.log1p(-p)
    batch = int(min(max(total * p * 1.05 + 64, 64), 1 << 22))
    out = []
    pos = -1
    while True:
        u = stream.draw(batch)
        with np.errstate(over="ignore"):
            gaps = np.floor(np.log1p(-u) / log_q)
        steps = np.minimum(gaps, float(total)).astype(np.int64) + 1
        idx = pos + np.cumsum(steps)
        keep = idx[idx < total]
        out.append(keep)
        if keep.size < batch:
            break
        pos = int(idx[-1])
    return np.concatenate(out)


def decode_pairs(k: np.ndarray):
    """Inverse of the colex pair index: ``k -> (u, v)`` with ``u < v``."""
    k = np.asarray(k, dtype=np.int64)
    v = ((1.0 + np.sqrt(1.0 + 8.0 * k.astype(np.float64))) // 2).astype(np.int64)
    v -= (v * (v - 1) // 2 > k)
    v += ((v + 1) * v // 2 <= k)
    return k - v * (v - 1) // 2, v


def gen_gnp(spec: GenSpec) -> Graph:
    """Sample G(n, p).

    For ``p <= 1/2`` the present edges are skip-sampled with probability
    ``p``. For ``p > 1/2`` the absent edges are skip-sampled with probability
    ``1 - p`` from the same seed and the result is inverted, so the graph is
    the exact complement of ``gen_gnp(GenSpec(n, 1 - p, seed))``.
    """
    n, p = spec.n, float(spec.p)
    total = n * (n - 1) // 2
    if p <= 0.5:
        u, v = decode_pairs(skip_sample(total, p, spec.seed))
        return Graph._from_colex(n, u, v)
    if n > BIT_ROWS_MAX_N:
        raise CapacityError(f"dense G(n, p) with n={n} exceeds the bit-row cap {BIT_ROWS_MAX_N}")
    u, v = decode_pairs(skip_sample(total, 1.0 - p, spec.seed))
    return _complement_rows(n, _rows_from_pairs(n, u, v))


def gnp(n: int, p: float, seed: int = 0) -> Graph:
    return gen_gnp(GenSpec(n, p, seed))


def _rows_from_pairs(n, u, v) -> np.ndarray:
    rows = np.zeros((n, _words(n)), dtype=_WORD)
    _set_bits(rows, u, v)
    _set_bits(rows, v, u)
    return rows


def _complement_rows(n: int, rows: np.ndarray) -> Graph:
    out = ~rows
    full, rem = divmod(n, 64)
    if rem:
        out[:, full] &= np.uint64((1 << rem) - 1)
    ar = np.arange(n)
    np.bitwise_and.at(out, (ar, ar >> 6), ~np.left_shift(np.uint64(1), (ar & 63).astype(np.uint64)))
    return Graph(n, rows=out)


def complement(g: Graph) -> Graph:
    """Graph on the same vertices whose edges are exactly the non-edges of ``g``."""
    return _complement_rows(g.n, np.array(g.rows))


# -- traversal ---------------------------------------------------------------


def gather_neighbors(indptr: np.ndarray, indices: np.ndarray, frontier: np.ndarray) -> np.ndarray:
    """Concatenated neighbour lists of the vertices in ``frontier``."""
    starts = indptr[frontier]
    lengths = indptr[frontier + 1] - starts
    total = int(lengths.sum())
    if total == 0:
        return np.zeros(0, dtype=indices.dtype)
    offsets = np.repeat(starts - np.concatenate([[0], np.cumsum(lengths)[:-1]]), lengths)
    return indices[offsets + np.arange(total)]


def bit_bfs_into(rows: np.ndarray, source: int, out: np.ndarray, max_level: int | None = None) -> None:
    """Word-parallel BFS from ``source`` writing levels into ``out``.

    ``out`` must be pre-filled with its sentinel. Each level ORs the bit rows
    of the whole frontier and masks off visited vertices. Raises
    :class:`CapacityError` if a level exceeds ``max_level``.
    """
    visited = np.zeros(rows.shape[1], dtype=_WORD)
    visited[source >> 6] = np.uint64(1) << np.uint64(source & 63)
    out[source] = 0
    frontier = np.array([source])
    level = 0
    while frontier.size:
        reach = np.bitwise_or.reduce(rows[frontier], axis=0)
        new = reach & ~visited
        if not new.any():
            break
        level += 1
        frontier = bits_to_indices(new)
        if max_level is not None and level > max_level:
            raise CapacityError(
                f"distance {level} from {source} to {int(frontier[0])} exceeds the cell limit {max_level}"
            )
        visited |= new
        out[frontier] = level


def _csr_bfs_into(g: Graph, source: int, out: np.ndarray) -> None:
    indptr, indices = g.indptr, g.indices
    seen = np.zeros(g.n, dtype=bool)
    seen[source] = True
    out[source] = 0
    frontier = np.array([source])
    level = 0
    while frontier.size:
        nb = gather_neighbors(indptr, indices, frontier)
        nb = np.unique(nb[~seen[nb]])
        if nb.size == 0:
            break
        level += 1
        seen[nb] = True
        out[nb] = level
        frontier = nb


def bfs_distances(g: Graph, source: int) -> np.ndarray:
    """Unweighted distances from ``source``; unreachable entries are :data:`UNREACHABLE`."""
    if not 0 <= source < g.n:
        raise InputError(f"source {source} out of range for n={g.n}")
    out = np.full(g.n, UNREACHABLE, dtype=np.int32)
    if g.has_rows:
        bit_bfs_into(g.rows, int(source), out)
    else:
        _csr_bfs_into(g, int(source), out)
    return out


def connected_components(g: Graph) -> np.ndarray:
    """Component label per vertex; labels are numbered by smallest member."""
    indptr, indices = g.indptr, g.indices
    adj = csr_matrix((np.ones(indices.size, dtype=np.int8), indices, indptr), shape=(g.n, g.n))
    _, labels = _scipy_components(adj, directed=False)
    _, first = np.unique(labels, return_index=True)
    remap = np.empty(first.size, dtype=np.int64)
    remap[np.argsort(first)] = np.arange(first.size)
    return remap[labels]
