"""All-pairs distances, diameter, and the diameter bound on hyperbolicity."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, InputError
from .graph import Graph, bit_bfs_into, connected_components

INF = 255
"""Unreachable sentinel of :class:`DistanceMatrix` cells."""

MAX_DISTANCE = INF - 1

#: Largest graph accepted by :func:`apsp` (an ``n * n`` byte matrix).
APSP_MAX_N = 20000


class DistanceMatrix:
    """Read-only ``n x n`` uint8 matrix of hop distances, :data:`INF` if unreachable."""

    __slots__ = ("entries",)

    def __init__(self, entries: np.ndarray):
        entries = np.asarray(entries)
        if entries.dtype != np.uint8 or entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise InputError("distance matrix must be a square uint8 array")
        entries.setflags(write=False)
        self.entries = entries

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, key):
        return self.entries[key]

    def finite(self) -> np.ndarray:
        return self.entries != INF

    def __repr__(self):
        return f"DistanceMatrix(n={self.n})"


def _fill_rows(rows, sources, out):
    for s in sources:
        bit_bfs_into(rows, int(s), out[s], max_level=MAX_DISTANCE)


def apsp(g: Graph, threads: int = 1, max_n: int = APSP_MAX_N) -> DistanceMatrix:
    """All-pairs shortest paths by one word-parallel BFS per source.

    Sources are split into contiguous chunks across ``threads`` workers;
    each worker owns its rows of the output, so the result does not depend
    on the thread count.
    """
    n = g.n
    if n > max_n:
        raise CapacityError(f"apsp on n={n} exceeds the configured cap of {max_n} vertices")
    rows = g.rows
    out = np.full((n, n), INF, dtype=np.uint8)
    threads = max(1, int(threads))
    if threads == 1 or n < 256:
        _fill_rows(rows, range(n), out)
    else:
        chunks = np.array_split(np.arange(n), threads * 4)
        with ThreadPoolExecutor(threads) as pool:
            for fut in [pool.submit(_fill_rows, rows, c, out) for c in chunks]:
                fut.result()
    return DistanceMatrix(out)


@dataclass(frozen=True)
class DiameterReport:
    """Exact diameter.

    ``diameter`` is ``None`` when the graph is disconnected (``infinite``);
    ``per_component`` lists the diameter of each component in label order.
    """

    diameter: int | None
    infinite: bool
    eccentricities: np.ndarray = field(repr=False)
    per_component: tuple
    labels: np.ndarray = field(repr=False)

    @property
    def max_component_diameter(self) -> int:
        return max(self.per_component)

    def as_json(self):
        return {
            "diameter": "inf" if self.infinite else self.diameter,
            "infinite": self.infinite,
            "per_component": list(self.per_component),
            "max_component_diameter": self.max_component_diameter,
        }


def diameter_from_matrix(dm: DistanceMatrix, labels: np.ndarray | None = None) -> DiameterReport:
    e = dm.entries
    ecc = np.where(e == INF, 0, e).max(axis=1).astype(np.int64)
    if labels is None:
        labels = _labels_from_matrix(e)
    k = int(labels.max()) + 1
    per = np.zeros(k, dtype=np.int64)
    np.maximum.at(per, labels, ecc)
    infinite = k > 1
    return DiameterReport(
        diameter=None if infinite else int(per[0]),
        infinite=infinite,
        eccentricities=ecc,
        per_component=tuple(int(x) for x in per),
        labels=labels,
    )


def _labels_from_matrix(e):
    n = e.shape[0]
    labels = np.full(n, -1, dtype=np.int64)
    k = 0
    for v in range(n):
        if labels[v] < 0:
            labels[e[v] != INF] = k
            k += 1
    return labels


def diameter(g: Graph, threads: int = 1) -> DiameterReport:
    """Exact diameter via all-source BFS."""
    return diameter_from_matrix(apsp(g, threads=threads), connected_components(g))


def delta_diameter_bound(D: int) -> int:
    """Largest doubled hyperbolicity a graph of diameter ``D`` can have."""
    return D if D % 2 == 0 else D - 1


def check_delta_diameter_bound(delta_doubled: int, D: int) -> bool:
    """``2 delta <= D`` for even ``D``; ``2 delta <= D - 1`` for odd ``D``."""
    if D < 0 or (isinstance(D, float) and math.isinf(D)):
        raise InputError(f"diameter must be finite and nonnegative, got {D}")
    return delta_doubled <= delta_diameter_bound(int(D))
