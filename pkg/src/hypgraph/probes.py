"""Local neighbourhood geometry of sampled vertices.

A probe runs a BFS truncated at radius ``r`` in the graph induced on the
vertices outside a forbidden set, and records the sphere and ball sizes,
whether each ball induces a tree, whether every sphere vertex has a single
neighbour in the previous sphere, and how the outer sphere splits between
two halves of the root's neighbourhood.

Only the CSR view is touched, so probes stay cheap on graphs far too large
for a distance matrix.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .graph import Graph, gather_neighbors
from .rng import uniform_stream


@dataclass(frozen=True)
class ProbeReport:
    vertex: int
    radius: int
    sphere_sizes: tuple
    ball_sizes: tuple
    ball_edges: tuple
    is_tree_ball: tuple
    unique_parent: tuple
    left_size: int
    right_size: int

    @property
    def unique_parent_ok(self) -> bool:
        return all(self.unique_parent)

    def as_json(self):
        return {
            "vertex": self.vertex,
            "radius": self.radius,
            "sphere_sizes": list(self.sphere_sizes),
            "ball_sizes": list(self.ball_sizes),
            "is_tree_ball": list(self.is_tree_ball),
            "unique_parent_ok": self.unique_parent_ok,
            "left_size": self.left_size,
            "right_size": self.right_size,
        }


def _forbidden_mask(n, forbidden):
    mask = np.zeros(n, dtype=bool)
    if forbidden is not None and len(forbidden):
        f = np.asarray(list(forbidden), dtype=np.int64)
        if f.min() < 0 or f.max() >= n:
            raise InputError("forbidden vertex out of range")
        mask[f] = True
    return mask


def probe_vertex(g: Graph, v: int, r: int, forbidden=None, *, _blocked=None) -> ProbeReport:
    """Truncated BFS statistics around ``v`` in ``g - forbidden``.

    Parents are the smallest-id neighbour in the previous sphere. The root's
    neighbours, sorted by id, are split into a left half of
    ``ceil(k / 2)`` and a right half of ``floor(k / 2)``; each vertex of the
    outer sphere is classed by the half its parent chain leads back to.
    """
    if r < 1:
        raise InputError(f"radius must be at least 1, got {r}")
    blocked = _blocked if _blocked is not None else _forbidden_mask(g.n, forbidden)
    if not 0 <= v < g.n or blocked[v]:
        raise InputError(f"vertex {v} is out of range or forbidden")
    indptr, indices = g.indptr, g.indices
    deg = np.diff(indptr)
    depth = np.full(g.n, -1, dtype=np.int32)
    parent = np.full(g.n, -1, dtype=np.int64)
    depth[v] = 0
    spheres = [np.array([v], dtype=np.int64)]
    unique = [True]
    for j in range(1, r + 1):
        front = spheres[-1]
        if front.size == 0:
            spheres.append(front)
            unique.append(True)
            continue
        nb = gather_neighbors(indptr, indices, front).astype(np.int64)
        src = np.repeat(front, deg[front])
        fresh = (depth[nb] < 0) & ~blocked[nb]
        nb, src = nb[fresh], src[fresh]
        order = np.lexsort((src, nb))
        nb, src = nb[order], src[order]
        new, first, counts = np.unique(nb, return_index=True, return_counts=True)
        depth[new] = j
        parent[new] = src[first]
        spheres.append(new)
        unique.append(bool(np.all(counts == 1)))

    ball = np.concatenate(spheres)
    nb = gather_neighbors(indptr, indices, ball).astype(np.int64)
    src = np.repeat(ball, deg[ball])
    inside = depth[nb] >= 0
    level = np.maximum(depth[src[inside]], depth[nb[inside]])
    edges_by_level = np.bincount(level, minlength=r + 1) // 2

    sphere_sizes = tuple(int(s.size) for s in spheres)
    ball_sizes = tuple(int(x) for x in np.cumsum(sphere_sizes))
    ball_edges = tuple(int(x) for x in np.cumsum(edges_by_level))
    is_tree = tuple(ball_edges[j] == ball_sizes[j] - 1 for j in range(r + 1))

    first_sphere = spheres[1]
    left_set = first_sphere[: (first_sphere.size + 1) // 2]
    branch = np.full(g.n, -1, dtype=np.int64)
    branch[first_sphere] = first_sphere
    for j in range(2, r + 1):
        branch[spheres[j]] = branch[parent[spheres[j]]]
    outer_branch = branch[spheres[r]]
    left = int(np.isin(outer_branch, left_set).sum())
    return ProbeReport(
        vertex=int(v),
        radius=int(r),
        sphere_sizes=sphere_sizes,
        ball_sizes=ball_sizes,
        ball_edges=ball_edges,
        is_tree_ball=is_tree,
        unique_parent=tuple(unique),
        left_size=left,
        right_size=sphere_sizes[r] - left,
    )


@dataclass(frozen=True)
class SurveySummary:
    samples: int
    radius: int
    d: float
    sphere_ratio_mean: tuple
    sphere_ratio_sd: tuple
    tree_fraction: float
    unique_parent_fraction: float
    reports: tuple

    def as_json(self):
        return {
            "samples": self.samples,
            "radius": self.radius,
            "d": self.d,
            "sphere_ratio_mean": list(self.sphere_ratio_mean),
            "sphere_ratio_sd": list(self.sphere_ratio_sd),
            "tree_fraction": self.tree_fraction,
            "unique_parent_fraction": self.unique_parent_fraction,
        }


def sample_vertices(n: int, k: int, seed: int, blocked=None) -> np.ndarray:
    """``k`` distinct vertices outside ``blocked``: the first ``k`` of a seeded random order."""
    pool = np.arange(n) if blocked is None else np.flatnonzero(~blocked)
    if k > pool.size:
        raise InputError(f"cannot sample {k} vertices from {pool.size}")
    keys = uniform_stream(seed).draw(pool.size)
    return pool[np.argsort(keys, kind="stable")[:k]]


def expansion_survey(
    g: Graph, samples: int, r: int, seed: int, d: float | None = None, forbidden=None, threads: int = 1
) -> SurveySummary:
    """Probe ``samples`` random vertices and aggregate ``|S(v,j)| / d**j`` and tree-ball frequency.

    ``d`` defaults to the mean degree ``2m / n``.
    """
    if d is None:
        d = 2 * g.m / g.n
    blocked = _forbidden_mask(g.n, forbidden)
    verts = sample_vertices(g.n, samples, seed, blocked)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            reports = list(pool.map(lambda v: probe_vertex(g, int(v), r, _blocked=blocked), verts))
    else:
        reports = [probe_vertex(g, int(v), r, _blocked=blocked) for v in verts]
    sizes = np.array([rep.sphere_sizes for rep in reports], dtype=np.float64)
    ratios = sizes / np.power(float(d), np.arange(r + 1))
    return SurveySummary(
        samples=samples,
        radius=r,
        d=float(d),
        sphere_ratio_mean=tuple(float(x) for x in ratios.mean(axis=0)),
        sphere_ratio_sd=tuple(float(x) for x in ratios.std(axis=0)),
        tree_fraction=float(np.mean([rep.is_tree_ball[r] for rep in reports])),
        unique_parent_fraction=float(np.mean([rep.unique_parent_ok for rep in reports])),
        reports=tuple(reports),
    )
