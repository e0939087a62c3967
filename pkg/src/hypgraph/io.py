"""Edge-list files.

Format::

    hypgraph v1
    <n> <m>
    <u> <v>        (m lines, 0 <= u < v < n, strictly ascending colex order)

Single spaces, every line newline-terminated.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .errors import ParseError
from .graph import Graph

HEADER = "hypgraph v1"
_PAIR = re.compile(r"^(\d+) (\d+)$")


def dumps_graph(g: Graph) -> str:
    e = g.edges
    lines = [HEADER, f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in e.tolist())
    return "\n".join(lines) + "\n"


def save_graph(g: Graph, path) -> None:
    Path(path).write_text(dumps_graph(g), encoding="utf-8", newline="\n")


def loads_graph(text: str) -> Graph:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != HEADER:
        raise ParseError(f"expected header {HEADER!r}", 1)
    if len(lines) < 2:
        raise ParseError("missing '<n> <m>' line", 2)
    mt = _PAIR.match(lines[1])
    if not mt:
        raise ParseError("expected '<n> <m>'", 2)
    n, m = int(mt.group(1)), int(mt.group(2))
    if n < 1:
        raise ParseError("n must be positive", 2)
    body = lines[2:]
    if len(body) != m:
        where = 2 + min(len(body), m) + 1
        raise ParseError(f"header declares {m} edges but file has {len(body)}", where)
    us = np.empty(m, dtype=np.int64)
    vs = np.empty(m, dtype=np.int64)
    prev = -1
    for k, line in enumerate(body):
        lineno = k + 3
        mt = _PAIR.match(line)
        if not mt:
            raise ParseError(f"expected '<u> <v>', got {line!r}", lineno)
        u, v = int(mt.group(1)), int(mt.group(2))
        if v >= n:
            raise ParseError(f"endpoint {v} out of range for n={n}", lineno)
        if u >= v:
            raise ParseError(f"edge {u} {v} must satisfy u < v", lineno)
        key = v * (v - 1) // 2 + u
        if key <= prev:
            raise ParseError(f"edge {u} {v} is not in ascending colex order", lineno)
        prev = key
        us[k], vs[k] = u, v
    return Graph._from_colex(n, us, vs)


def load_graph(path) -> Graph:
    return loads_graph(Path(path).read_text(encoding="utf-8"))


def load_vertex_set(path) -> list:
    """Whitespace-separated vertex ids."""
    text = Path(path).read_text(encoding="utf-8")
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        for tok in line.split():
            if not tok.isdigit():
                raise ParseError(f"bad vertex id {tok!r}", lineno)
            out.append(int(tok))
    return out
