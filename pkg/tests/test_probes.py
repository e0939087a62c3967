import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypgraph import families as fam
from hypgraph.errors import InputError
from hypgraph.graph import UNREACHABLE, bfs_distances, gnp
from hypgraph.probes import expansion_survey, probe_vertex, sample_vertices


def consistent(rep):
    r = rep.radius
    assert rep.ball_sizes == tuple(np.cumsum(rep.sphere_sizes).tolist())
    assert all(a <= b for a, b in zip(rep.ball_sizes, rep.ball_sizes[1:]))
    for j in range(r + 1):
        if rep.is_tree_ball[j]:
            assert all(rep.unique_parent[: j + 1])
            assert rep.ball_edges[j] == rep.ball_sizes[j] - 1
    if r >= 1 and rep.is_tree_ball[r - 1]:
        assert rep.left_size + rep.right_size == rep.sphere_sizes[r]


def test_binary_tree_root():
    rep = probe_vertex(fam.complete_binary_tree(3), 0, 2)
    assert rep.sphere_sizes == (1, 2, 4)
    assert all(rep.is_tree_ball)
    assert (rep.left_size, rep.right_size) == (2, 2)
    consistent(rep)


def test_c6():
    for v in range(6):
        rep = probe_vertex(fam.cycle(6), v, 2)
        assert rep.sphere_sizes == (1, 2, 2)
        assert rep.is_tree_ball[2]


def test_c4_two_parents():
    rep = probe_vertex(fam.cycle(4), 0, 2)
    assert rep.sphere_sizes == (1, 2, 1)
    assert rep.unique_parent == (True, True, False)
    assert not rep.unique_parent_ok
    assert not rep.is_tree_ball[2]


def test_forbidden_vertices():
    g = fam.cycle(6)
    rep = probe_vertex(g, 0, 3, forbidden=[3])
    assert rep.sphere_sizes == (1, 2, 2, 0)
    assert all(rep.is_tree_ball)
    with pytest.raises(InputError):
        probe_vertex(g, 3, 2, forbidden=[3])
    with pytest.raises(InputError):
        probe_vertex(g, 0, 0)


def test_complete_survey_ratio():
    s = expansion_survey(fam.complete(5), samples=5, r=1, seed=0)
    assert s.d == 4.0
    assert s.sphere_ratio_mean[1] == 1.0 and s.sphere_ratio_sd[1] == 0.0


def test_sample_vertices():
    v = sample_vertices(100, 30, seed=4)
    assert len(set(v.tolist())) == 30
    assert np.array_equal(v, sample_vertices(100, 30, seed=4))
    blocked = np.zeros(100, dtype=bool)
    blocked[:50] = True
    assert sample_vertices(100, 50, seed=1, blocked=blocked).min() >= 50
    with pytest.raises(InputError):
        sample_vertices(10, 11, seed=0)


def test_probe_invariants_on_corpus(corpus):
    for name, g in corpus.items():
        for v in range(min(g.n, 4)):
            for r in (1, 2, 3):
                rep = probe_vertex(g, v, r)
                consistent(rep)
                dist = bfs_distances(g, v)
                want = [int(np.sum(dist == j)) for j in range(r + 1)]
                assert list(rep.sphere_sizes) == want, name


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 80), seed=st.integers(0, 10 ** 6), r=st.integers(1, 5))
def test_trees_are_tree_balls(n, seed, r):
    g = fam.random_tree(n, seed)
    rep = probe_vertex(g, seed % n, r)
    assert all(rep.is_tree_ball) and rep.unique_parent_ok
    assert rep.left_size + rep.right_size == rep.sphere_sizes[r]
    # halves of N(v,1): sizes differ by at most one
    k = rep.sphere_sizes[1]
    if r == 1:
        assert rep.left_size - rep.right_size == k % 2


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 60), p=st.floats(0.02, 0.5), seed=st.integers(0, 10 ** 6), r=st.integers(1, 4))
def test_probe_matches_bfs(n, p, seed, r):
    g = gnp(n, p, seed)
    v = seed % n
    rep = probe_vertex(g, v, r)
    consistent(rep)
    dist = bfs_distances(g, v)
    assert list(rep.sphere_sizes) == [int(np.sum(dist == j)) for j in range(r + 1)]
    assert rep.ball_sizes[-1] == int(np.sum(dist <= r))
    assert UNREACHABLE > r


def test_survey_threads_identical():
    g = gnp(5000, 6 / 4999, 3)
    a = expansion_survey(g, 50, 2, seed=1)
    b = expansion_survey(g, 50, 2, seed=1, threads=4)
    assert a.as_json() == b.as_json()
    assert [x.as_json() for x in a.reports] == [x.as_json() for x in b.reports]
