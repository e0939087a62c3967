import pytest
from hypothesis import given, settings, strategies as st

from hypgraph import families as fam
from hypgraph.errors import ParseError
from hypgraph.graph import gnp
from hypgraph.io import dumps_graph, load_graph, load_vertex_set, loads_graph, save_graph


def test_roundtrip_k4(tmp_path):
    path = tmp_path / "k4.txt"
    save_graph(fam.complete(4), path)
    assert path.read_text() == "hypgraph v1\n4 6\n0 1\n0 2\n1 2\n0 3\n1 3\n2 3\n"
    assert load_graph(path) == fam.complete(4)


def test_roundtrip_isolated():
    g = fam.empty(3)
    assert loads_graph(dumps_graph(g)) == g


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 50), p=st.floats(0, 1), seed=st.integers(0, 10 ** 6))
def test_roundtrip_random(n, p, seed):
    g = gnp(n, p, seed)
    assert loads_graph(dumps_graph(g)) == g


@pytest.mark.parametrize(
    "text,line",
    [
        ("hypgraph v2\n2 0\n", 1),
        ("", 1),
        ("hypgraph v1\n", 2),
        ("hypgraph v1\n4  1\n0 1\n", 2),
        ("hypgraph v1\n4 1\n3 1\n", 3),
        ("hypgraph v1\n4 1\n1 1\n", 3),
        ("hypgraph v1\n4 1\n1 4\n", 3),
        ("hypgraph v1\n4 2\n0 3\n0 1\n", 4),
        ("hypgraph v1\n4 2\n0 1\n0 1\n", 4),
        ("hypgraph v1\n4 1\n0 x\n", 3),
        ("hypgraph v1\n4 5\n0 1\n0 2\n1 2\n0 3\n", 7),
        ("hypgraph v1\n4 1\n0 1\n1 2\n", 4),
    ],
)
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as info:
        loads_graph(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")


def test_vertex_set(tmp_path):
    p = tmp_path / "f.txt"
    p.write_text("1 2\n5\n")
    assert load_vertex_set(p) == [1, 2, 5]
    p.write_text("1 -2\n")
    with pytest.raises(ParseError):
        load_vertex_set(p)
