"""Graph file formats.

Edge list: a header line ``n m`` optionally followed by a base flag ``0`` or
``1`` (default 1), then ``m`` lines ``u v``. JSON: ``{"n": n, "edges": [[u, v],
...]}`` with an optional ``"base"`` key. Writers always emit 1-based labels,
no flag, and edges sorted with ``u < v``, so read/write round trips are
byte-identical for canonical files.
"""

from __future__ import annotations

import json
from pathlib import Path

from .graph import Graph, GraphError


def _shift(edges, base: int):
    if base not in (0, 1):
        raise GraphError(f"base flag must be 0 or 1, got {base}")
    return [(u + 1 - base, v + 1 - base) for u, v in edges]


def parse_edge_list(text: str) -> Graph:
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise GraphError("empty edge list")
    head = lines[0]
    if len(head) not in (2, 3):
        raise GraphError(f"header must be 'n m [base]', got {' '.join(head)!r}")
    try:
        n, m = int(head[0]), int(head[1])
        base = int(head[2]) if len(head) == 3 else 1
        edges = []
        for ln in lines[1:]:
            if len(ln) != 2:
                raise GraphError(f"edge line must hold two integers, got {' '.join(ln)!r}")
            edges.append((int(ln[0]), int(ln[1])))
    except ValueError as exc:
        raise GraphError(f"malformed edge list: {exc}") from None
    if len(edges) != m:
        raise GraphError(f"header announces {m} edges, found {len(edges)}")
    return Graph.from_edges(n, _shift(edges, base))


def format_edge_list(g: Graph) -> str:
    rows = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.sorted_edges()]
    return "\n".join(rows) + "\n"


def parse_json(text: str) -> Graph:
    try:
        data = json.loads(text)
        n = int(data["n"])
        base = int(data.get("base", 1))
        edges = [(int(a), int(b)) for a, b in data.get("edges", [])]
    except (ValueError, KeyError, TypeError) as exc:
        raise GraphError(f"malformed JSON graph: {exc}") from None
    return Graph.from_edges(n, _shift(edges, base))


def format_json(g: Graph) -> str:
    return json.dumps({"n": g.n, "edges": [list(e) for e in g.sorted_edges()]}) + "\n"


def read_graph(path: str | Path) -> Graph:
    """Load a graph, choosing the parser from the ``.json`` suffix."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise GraphError(f"cannot read {path}: {exc}") from None
    return parse_json(text) if path.suffix.lower() == ".json" else parse_edge_list(text)


def write_graph(g: Graph, path: str | Path) -> None:
    path = Path(path)
    path.write_text(format_json(g) if path.suffix.lower() == ".json" else format_edge_list(g))
