"""Serialization for explicit bipartite graphs.

The JSON shape is positional: two label arrays and an edge list of index
pairs into them. Vertex ids are reconstructed as enumeration positions, so
a dump/load round trip preserves structure and labels but renumbers ids.
DOT export is for eyeballing small instances; it draws the A side as boxes
and the B side as circles and can highlight an edge subset.
"""

from __future__ import annotations

import json
from typing import Iterable

from .core import BipartiteGraph, Edge, Vertex, avert, bvert
from .errors import FormatError


def to_json_dict(g: BipartiteGraph) -> dict:
    a_pos = {v: i for i, v in enumerate(g.a_vertices)}
    b_pos = {v: i for i, v in enumerate(g.b_vertices)}
    return {
        "a": [g.label(v) for v in g.a_vertices],
        "b": [g.label(v) for v in g.b_vertices],
        "edges": [[a_pos[x], b_pos[y]] for x, y in g.edges],
    }


def dump_json(g: BipartiteGraph) -> str:
    return json.dumps(to_json_dict(g), indent=2) + "\n"


def from_json_dict(data: dict) -> BipartiteGraph:
    if not isinstance(data, dict):
        raise FormatError("top level must be an object")
    for key in ("a", "b", "edges"):
        if key not in data:
            raise FormatError(f"missing key {key!r}")
    a_labels, b_labels, edges = data["a"], data["b"], data["edges"]
    if not isinstance(a_labels, list) or not all(
        isinstance(s, str) for s in a_labels
    ):
        raise FormatError('"a" must be a list of strings')
    if not isinstance(b_labels, list) or not all(
        isinstance(s, str) for s in b_labels
    ):
        raise FormatError('"b" must be a list of strings')
    if not isinstance(edges, list):
        raise FormatError('"edges" must be a list')
    a_ids = [avert(i) for i in range(len(a_labels))]
    b_ids = [bvert(j) for j in range(len(b_labels))]
    seen: set[tuple[int, int]] = set()
    out: list[Edge] = []
    for k, item in enumerate(edges):
        if (
            not isinstance(item, list)
            or len(item) != 2
            or not all(isinstance(c, int) and not isinstance(c, bool) for c in item)
        ):
            raise FormatError(f"edge {k} must be a pair of integers")
        ai, bi = item
        if not (0 <= ai < len(a_labels)):
            raise FormatError(f"edge {k} references missing A-vertex {ai}")
        if not (0 <= bi < len(b_labels)):
            raise FormatError(f"edge {k} references missing B-vertex {bi}")
        if (ai, bi) in seen:
            raise FormatError(f"edge {k} repeats pair ({ai}, {bi})")
        seen.add((ai, bi))
        out.append((a_ids[ai], b_ids[bi]))
    labels: dict[Vertex, str] = {}
    for i, s in enumerate(a_labels):
        labels[a_ids[i]] = s
    for j, s in enumerate(b_labels):
        labels[b_ids[j]] = s
    return BipartiteGraph(a_ids, b_ids, out, labels)


def load_json(text: str) -> BipartiteGraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid JSON: {exc}") from exc
    return from_json_dict(data)


def _dot_name(v: Vertex) -> str:
    return f"{v[0]}{v[1]}"


def to_dot(
    g: BipartiteGraph,
    highlight: Iterable[Edge] = (),
    dashed: Iterable[Edge] = (),
) -> str:
    """Render as an undirected DOT graph.

    Highlighted edges come out bold red, dashed ones gray; an edge listed in
    both keeps the highlight. Vertex order is deterministic.
    """
    strong = {tuple(e) for e in highlight}
    faded = {tuple(e) for e in dashed} - strong
    lines = ["graph g {", "  node [fontsize=10];"]
    for v in g.a_vertices:
        lines.append(f'  {_dot_name(v)} [shape=box, label="{g.label(v)}"];')
    for v in g.b_vertices:
        lines.append(f'  {_dot_name(v)} [shape=circle, label="{g.label(v)}"];')
    for e in g.edges:
        x, y = e
        attrs = ""
        if e in strong:
            attrs = " [color=red, penwidth=2]"
        elif e in faded:
            attrs = " [color=gray, style=dashed]"
        lines.append(f"  {_dot_name(x)} -- {_dot_name(y)}{attrs};")
    lines.append("}")
    return "\n".join(lines) + "\n"
