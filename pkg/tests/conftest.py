"""Shared corpus and pure-python oracles.

The oracles here deliberately avoid numpy and the package's own BFS so they
can check it independently.
"""

import itertools
from collections import deque

import pytest

from hypgraph import families as fam
from hypgraph.graph import gnp

ORACLE_INF = float("inf")


def adjacency(g):
    adj = [set() for _ in range(g.n)]
    for u, v in g.edges.tolist():
        adj[u].add(v)
        adj[v].add(u)
    return adj


def oracle_bfs(adj, s):
    dist = [ORACLE_INF] * len(adj)
    dist[s] = 0
    q = deque([s])
    while q:
        x = q.popleft()
        for y in adj[x]:
            if dist[y] == ORACLE_INF:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def oracle_apsp(g):
    adj = adjacency(g)
    return [oracle_bfs(adj, s) for s in range(g.n)]


def oracle_delta_doubled(g):
    """Max over same-component quadruples of (largest - middle pairing sum)."""
    D = oracle_apsp(g)
    best = 0
    for u, v, x, y in itertools.combinations(range(g.n), 4):
        s = sorted([D[u][v] + D[x][y], D[u][x] + D[v][y], D[u][y] + D[v][x]])
        if s[2] == ORACLE_INF:
            continue
        best = max(best, s[2] - s[1])
    return best


def named_graphs():
    out = {
        "P1": fam.path(1),
        "P2": fam.path(2),
        "P5": fam.path(5),
        "P12": fam.path(12),
        "star5": fam.star(5),
        "bintree3": fam.complete_binary_tree(3),
        "petersen": fam.petersen(),
        "K4-e": fam.complete_minus_matching(4, 1),
        "K8-2e": fam.complete_minus_matching(8, 2),
        "K9-3e": fam.complete_minus_matching(9, 3),
        "C4+P3+K1": fam.disjoint_union(fam.cycle(4), fam.path(3), fam.empty(1)),
    }
    for k in range(4, 9):
        out[f"C{k}"] = fam.cycle(k)
    for k in (1, 2, 3, 4, 5, 7):
        out[f"K{k}"] = fam.complete(k)
    for s in range(4):
        out[f"tree{s}"] = fam.random_tree(6 + 5 * s, seed=s)
    return out


def random_corpus(count=100, seed=0):
    out = []
    for t in range(count):
        n = 5 + (t * 7) % 36
        p = (1 + t % 9) / 10
        out.append(gnp(n, p, seed=seed * 100003 + t))
    return out


@pytest.fixture(scope="session")
def corpus():
    graphs = dict(named_graphs())
    for t, g in enumerate(random_corpus()):
        graphs[f"gnp{t}"] = g
    return graphs


ACCEPTANCE_LINES = []


def record_criterion(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
