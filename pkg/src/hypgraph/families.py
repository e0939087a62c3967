"""Named graphs used as fixtures and regression corpus."""

from __future__ import annotations

import itertools

import numpy as np

from .graph import Graph
from .rng import uniform_stream


def empty(n: int) -> Graph:
    return Graph.from_edges(n, [])


def complete(n: int) -> Graph:
    return Graph.from_edges(n, itertools.combinations(range(n), 2))


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star(leaves: int) -> Graph:
    """K_{1,leaves} with centre 0."""
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_binary_tree(depth: int) -> Graph:
    """Heap-numbered binary tree: root 0, children of k are 2k+1 and 2k+2."""
    n = 2 ** (depth + 1) - 1
    return Graph.from_edges(n, [((k - 1) // 2, k) for k in range(1, n)])


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def complete_minus_matching(n: int, k: int) -> Graph:
    """K_n without the ``k`` disjoint edges {0,1}, {2,3}, ..."""
    if 2 * k > n:
        raise ValueError("matching larger than the vertex set")
    missing = {(2 * i, 2 * i + 1) for i in range(k)}
    return Graph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if e not in missing])


def random_tree(n: int, seed: int = 0) -> Graph:
    """Random recursive tree: vertex k attaches to a uniform earlier vertex."""
    if n == 1:
        return empty(1)
    stream = uniform_stream(seed)
    ks = np.arange(1, n)
    parents = np.minimum((stream.draw(n - 1) * ks).astype(np.int64), ks - 1)
    return Graph.from_edges(n, np.stack([parents, ks], axis=1))


def disjoint_union(*graphs: Graph) -> Graph:
    offset = 0
    parts = []
    for g in graphs:
        parts.append(g.edges + offset)
        offset += g.n
    return Graph.from_edges(offset, np.concatenate(parts) if parts else [])
