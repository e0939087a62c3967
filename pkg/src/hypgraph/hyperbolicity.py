"""Exact Gromov hyperbolicity through the four-point condition.

For four vertices the three pairing sums are ``d(u,v)+d(x,y)``,
``d(u,x)+d(v,y)`` and ``d(u,y)+d(v,x)``; the quadruple's doubled
hyperbolicity is the gap between the two largest. All values here are kept
doubled so they stay integers.

Two independent routes compute the maximum over all quadruples:

* :func:`hyperbolicity_naive` enumerates every 4-subset;
* :func:`hyperbolicity_pruned` walks vertex pairs in decreasing distance.
  The doubled value of a quadruple is at most the smaller distance of its
  largest pairing (from ``d1 <= d2 + d3`` and two triangle inequalities), so
  once the outer pair is no farther than the best value found, nothing
  later can beat it. The search also stops as soon as the best value meets
  the diameter bound (``D`` for even diameter, ``D - 1`` for odd).

Quadruples are only formed inside one connected component.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, CrossComponentError, InputError
from .graph import Graph, bits_to_indices, connected_components
from .metric import APSP_MAX_N, INF, DistanceMatrix, apsp, delta_diameter_bound
from .rng import uniform_stream

NAIVE_MAX_N = 500

# Elements per vectorised evaluation block.
_BLOCK = 1 << 21
# Above this many candidate pairs the witness search scans quadruples in
# lexicographic order instead of pairing candidate pairs.
_PAIR_WITNESS_MAX = 4096


def format_delta(delta_doubled: int) -> str:
    """``3 -> "1.5"``, ``2 -> "1"``."""
    whole, half = divmod(int(delta_doubled), 2)
    return f"{whole}.5" if half else str(whole)


@dataclass(frozen=True)
class QuadEvaluation:
    vertices: tuple
    sums: tuple

    @property
    def delta_doubled(self) -> int:
        return self.sums[0] - self.sums[1]

    @property
    def delta(self) -> float:
        return self.delta_doubled / 2


@dataclass(frozen=True)
class HypResult:
    delta_doubled: int
    witness: tuple | None
    algorithm: str
    pairs_scanned: int
    runtime_ms: float

    @property
    def delta(self) -> float:
        return self.delta_doubled / 2

    def as_json(self, witness=True):
        out = {
            "delta_doubled": self.delta_doubled,
            "delta": format_delta(self.delta_doubled),
            "algorithm": self.algorithm,
        }
        if witness:
            out["witness"] = list(self.witness) if self.witness is not None else None
        out["pairs_scanned"] = self.pairs_scanned
        out["runtime_ms"] = round(self.runtime_ms, 3)
        return out


def _entries(D) -> np.ndarray:
    return D.entries if isinstance(D, DistanceMatrix) else np.asarray(D)


def eval_quadruple(D, u, v, x, y) -> QuadEvaluation:
    verts = tuple(int(w) for w in (u, v, x, y))
    if len(set(verts)) < 4:
        raise InputError(f"quadruple {verts} repeats a vertex")
    e = _entries(D)
    for i in range(4):
        for j in range(i + 1, 4):
            if e[verts[i], verts[j]] == INF:
                raise CrossComponentError(
                    f"vertices {verts[i]} and {verts[j]} lie in different components"
                )
    u, v, x, y = verts
    sums = sorted(
        (int(e[u, v]) + int(e[x, y]), int(e[u, x]) + int(e[v, y]), int(e[u, y]) + int(e[v, x])),
        reverse=True,
    )
    return QuadEvaluation(verts, tuple(sums))


def _gap(s1, s2, s3):
    """Largest minus second largest, elementwise."""
    hi = np.maximum(np.maximum(s1, s2), s3)
    lo = np.minimum(np.minimum(s1, s2), s3)
    return hi - (s1 + s2 + s3 - hi - lo)


# -- brute force -------------------------------------------------------------


def hyperbolicity_naive(g: Graph, max_n: int = NAIVE_MAX_N, dm: DistanceMatrix | None = None) -> HypResult:
    """Maximum over all C(n, 4) within-component quadruples, by enumeration.

    For each smallest vertex ``a`` the remaining triples ``b < c < y`` are
    evaluated as one array in row-major (hence lexicographic) order, so the
    first maximiser met is the lexicographically smallest.
    """
    n = g.n
    if n > max_n:
        raise CapacityError(f"naive enumeration on n={n} exceeds the configured cap of {max_n}")
    t0 = time.perf_counter()
    e = _entries(dm if dm is not None else apsp(g)).astype(np.int16)
    best, witness, scanned = -1, None, 0
    for a in range(n - 3):
        rest = np.arange(a + 1, n)
        r = rest.size
        step = max(1, _BLOCK // (r * r))
        for lo in range(0, r - 2, step):
            bi = rest[lo:lo + step][:, None, None]
            ci = rest[None, :, None]
            yi = rest[None, None, :]
            order_ok = (bi < ci) & (ci < yi)
            s1 = e[a, bi] + e[ci, yi]
            s2 = e[a, ci] + e[bi, yi]
            s3 = e[a, yi] + e[bi, ci]
            finite = (
                order_ok
                & (e[a, bi] != INF) & (e[a, ci] != INF) & (e[a, yi] != INF)
                & (e[bi, ci] != INF) & (e[bi, yi] != INF) & (e[ci, yi] != INF)
            )
            val = np.where(finite, _gap(s1, s2, s3), -1)
            scanned += int(finite.sum())
            k = int(val.argmax())
            if val.flat[k] > best:
                best = int(val.flat[k])
                kb, kc, ky = np.unravel_index(k, val.shape)
                witness = (a, int(rest[lo + kb]), int(rest[kc]), int(rest[ky]))
    if best < 0:
        best = 0
    return HypResult(best, witness, "naive", scanned, (time.perf_counter() - t0) * 1e3)


# -- pruned search -----------------------------------------------------------


def _candidate_pairs(e: np.ndarray, labels: np.ndarray):
    """Within-component pairs of components with >= 4 vertices, sorted by distance descending.

    Ties keep colexicographic order.
    """
    sizes = np.bincount(labels)
    big = sizes[labels] >= 4
    mask = np.tril(e != INF, k=-1)
    mask &= big[:, None]
    vv, uu = np.nonzero(mask)
    dist = e[vv, uu]
    order = np.argsort(-dist.astype(np.int16), kind="stable")
    return uu[order], vv[order], dist[order].astype(np.int16), big


def _upper_bound(e: np.ndarray, labels: np.ndarray, big: np.ndarray) -> int:
    ecc = np.where(e == INF, 0, e).max(axis=1)
    ub = 0
    for c in np.unique(labels[big]):
        ub = max(ub, delta_diameter_bound(int(ecc[labels == c].max())))
    return ub


def _eval_block(e, pu, pv, pd, outer: np.ndarray, k1: int):
    """Best doubled value of outer pairs against every earlier pair, and count."""
    a = pu[outer][:, None]
    b = pv[outer][:, None]
    c = pu[None, :k1]
    y = pv[None, :k1]
    eac = e[a, c]
    ok = (np.arange(k1)[None, :] < outer[:, None]) & (a != c) & (a != y) & (b != c) & (b != y) & (eac != INF)
    s1 = pd[outer][:, None] + pd[None, :k1]
    s2 = eac.astype(np.int16) + e[b, y]
    s3 = e[a, y].astype(np.int16) + e[b, c]
    val = np.where(ok, _gap(s1, s2, s3), -1)
    return int(val.max()), int(ok.sum())


def hyperbolicity_pruned(
    g: Graph,
    threads: int = 1,
    dm: DistanceMatrix | None = None,
    max_n: int = APSP_MAX_N,
    witness: bool = True,
) -> HypResult:
    """Exact doubled hyperbolicity by the sorted-pairs search.

    Outer pairs are taken in blocks; each block is evaluated against all
    earlier pairs and split across ``threads`` workers. The block schedule
    depends only on the best value after each block, never on the thread
    count, so results and counters are thread-independent.

    With ``witness=True`` a second exact pass returns the lexicographically
    smallest quadruple attaining the value.
    """
    t0 = time.perf_counter()
    dm = dm if dm is not None else apsp(g, threads=threads, max_n=max_n)
    e = dm.entries
    labels = connected_components(g)
    pu, pv, pd, big = _candidate_pairs(e, labels)
    if not big.any():
        return HypResult(0, None, "pruned", 0, (time.perf_counter() - t0) * 1e3)
    ub = _upper_bound(e, labels, big)
    neg = -pd
    best, scanned, k0 = 0, 0, 0
    threads = max(1, int(threads))
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        while best < ub:
            cut = int(np.searchsorted(neg, -best, side="left"))  # pairs with distance > best
            if k0 >= cut:
                break
            width = int((-k0 + math.isqrt(k0 * k0 + 4 * _BLOCK)) // 2)
            k1 = min(cut, k0 + max(1, min(width, max(64, k0))))
            outer = np.arange(k0, k1)
            if pool is None or outer.size < 2 * threads:
                results = [_eval_block(e, pu, pv, pd, outer, k1)]
            else:
                parts = np.array_split(outer, threads)
                results = list(pool.map(lambda o: _eval_block(e, pu, pv, pd, o, int(o[-1]) + 1), parts))
            for val, count in results:
                best = max(best, val)
                scanned += count
            k0 = k1
    finally:
        if pool is not None:
            pool.shutdown()
    w = _lexmin_witness(e, labels, big, pu, pv, pd, best) if witness else None
    return HypResult(best, w, "pruned", scanned, (time.perf_counter() - t0) * 1e3)


def _lexmin_witness(e, labels, big, pu, pv, pd, target: int):
    """Lexicographically smallest sorted quadruple whose doubled value is ``target``.

    ``target`` must be the maximum. Every maximiser's largest pairing uses
    two pairs at distance >= ``target``; when those pairs are few they are
    paired directly, otherwise quadruples are scanned in lexicographic order
    and the scan stops at the first hit.
    """
    if target == 0:
        comps = np.unique(labels[big])
        return min(tuple(int(x) for x in np.flatnonzero(labels == c)[:4]) for c in comps)
    count = int(np.searchsorted(-pd, -target, side="right"))
    if count <= _PAIR_WITNESS_MAX:
        return _witness_from_pairs(e, pu[:count], pv[:count], target)
    return _witness_lex_scan(e, labels, big, target)


def _witness_from_pairs(e, su, sv, target):
    best = None
    k = su.size
    step = max(1, _BLOCK // max(k, 1))
    for lo in range(0, k, step):
        a = su[lo:lo + step][:, None]
        b = sv[lo:lo + step][:, None]
        c = su[None, :]
        y = sv[None, :]
        ok = (a != c) & (a != y) & (b != c) & (b != y) & (e[a, c] != INF)
        s1 = e[a, b].astype(np.int16) + e[c, y]
        s2 = e[a, c].astype(np.int16) + e[b, y]
        s3 = e[a, y].astype(np.int16) + e[b, c]
        hit = ok & (_gap(s1, s2, s3) == target)
        if not hit.any():
            continue
        i, j = np.nonzero(hit)
        quads = np.sort(np.stack([su[lo + i], sv[lo + i], su[j], sv[j]], axis=1), axis=1)
        first = np.lexsort(quads.T[::-1])[0]
        cand = tuple(int(x) for x in quads[first])
        best = cand if best is None else min(best, cand)
    return best


def _witness_lex_scan(e, labels, big, target):
    e16 = e.astype(np.int16)
    for w0 in np.flatnonzero(big):
        members = np.flatnonzero(labels == labels[w0])
        members = members[members > w0]
        for idx, w1 in enumerate(members[:-2]):
            rest = members[idx + 1:]
            r = rest.size
            step = max(1, _BLOCK // r)
            for lo in range(0, r - 1, step):
                ci = rest[lo:lo + step][:, None]
                yi = rest[None, :]
                s1 = e16[w0, w1] + e16[ci, yi]
                s2 = e16[w0, ci] + e16[w1, yi]
                s3 = e16[w0, yi] + e16[w1, ci]
                hit = (ci < yi) & (_gap(s1, s2, s3) == target)
                if hit.any():
                    k = int(np.argmax(hit))
                    kc, ky = divmod(k, r)
                    return (int(w0), int(w1), int(rest[lo + kc]), int(rest[ky]))
    return None


def hyperbolicity(g: Graph, algo: str = "pruned", threads: int = 1, dm: DistanceMatrix | None = None) -> HypResult:
    if algo == "naive":
        return hyperbolicity_naive(g, dm=dm)
    if algo == "pruned":
        return hyperbolicity_pruned(g, threads=threads, dm=dm)
    raise InputError(f"unknown algorithm {algo!r}")


# -- lower-bound certificates ------------------------------------------------


@dataclass(frozen=True)
class LowerBound:
    """A quadruple's doubled value, which bounds the graph's from below.

    ``certificate`` is set when the sums have the shape ``d2 = d3 = i`` with
    ``i`` even and positive and ``d1 >= 2i``, the geometry that forces
    hyperbolicity at least ``i / 2``.
    """

    bound: int
    certificate: bool
    i: int | None
    evaluation: QuadEvaluation


def certify_lower_bound(D, u, v, x, y) -> LowerBound:
    ev = eval_quadruple(D, u, v, x, y)
    d1, d2, d3 = ev.sums
    geometric = d2 == d3 and d2 > 0 and d2 % 2 == 0 and d1 >= 2 * d2
    return LowerBound(ev.delta_doubled, geometric, d2 if geometric else None, ev)


def _canonical_cycle(w):
    """Rotate/reflect cycle order so it starts at its minimum with the smaller neighbour next."""
    k = w.index(min(w))
    w = w[k:] + w[:k]
    if w[1] > w[3]:
        w = (w[0], w[3], w[2], w[1])
    return tuple(int(x) for x in w)


def is_induced_c4(g: Graph, cycle) -> bool:
    """True iff ``cycle`` (in cycle order) has its 4 sides as edges and neither diagonal."""
    a, b, c, d = cycle
    if len({a, b, c, d}) < 4:
        return False
    sides = g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(c, d) and g.has_edge(d, a)
    return sides and not g.has_edge(a, c) and not g.has_edge(b, d)


def _full_c4_scan(g: Graph):
    rows = g.rows
    n = g.n
    for x in range(n):
        for y in range(x + 1, n):
            if g.has_edge(x, y):
                continue
            common = bits_to_indices(rows[x] & rows[y])
            for i, a in enumerate(common[:-1]):
                for b in common[i + 1:]:
                    if not g.has_edge(int(a), int(b)):
                        return _canonical_cycle((x, int(a), y, int(b)))
    return None


def find_induced_c4(g: Graph, budget: int = 100_000, seed: int = 0):
    """An induced 4-cycle in cycle order, or ``None``.

    Graphs with at most 100 vertices are scanned exhaustively. Larger graphs
    get ``budget`` seeded random attempts: pick a vertex ``u`` and two of its
    neighbours ``x, y``; if ``x, y`` are non-adjacent and have a common
    neighbour other than ``u`` that is not adjacent to ``u``, the smallest
    such vertex closes an induced cycle.
    """
    if g.n <= 100:
        return _full_c4_scan(g)
    stream = uniform_stream(seed)
    deg = g.degrees()
    use_rows = g.has_rows
    rows = g.rows if use_rows else None
    draws = stream.draw(3 * budget).reshape(budget, 3)
    for r0, r1, r2 in draws:
        u = min(int(r0 * g.n), g.n - 1)
        k = int(deg[u])
        if k < 2:
            continue
        i = min(int(r1 * k), k - 1)
        j = min(int(r2 * (k - 1)), k - 2)
        if j >= i:
            j += 1
        nb = g.neighbors(u)
        x, y = int(nb[i]), int(nb[j])
        if g.has_edge(x, y):
            continue
        if use_rows:
            cand = bits_to_indices(rows[x] & rows[y] & ~rows[u])
        else:
            cand = np.setdiff1d(np.intersect1d(g.neighbors(x), g.neighbors(y)), nb)
        cand = cand[cand != u]
        if cand.size:
            return _canonical_cycle((u, x, int(cand[0]), y))
    return None
