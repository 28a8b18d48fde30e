"""JSON and DOT serialization."""

import json

import pytest

from doublehall.core import BipartiteGraph, avert, bvert
from doublehall.errors import FormatError
from doublehall.graphio import (
    dump_json,
    from_json_dict,
    load_json,
    to_dot,
    to_json_dict,
)


def sample() -> BipartiteGraph:
    a = [avert(0), avert(1)]
    b = [bvert(0), bvert(1), bvert(2)]
    edges = [
        (avert(0), bvert(0)),
        (avert(0), bvert(1)),
        (avert(1), bvert(1)),
        (avert(1), bvert(2)),
    ]
    return BipartiteGraph(a, b, edges, {avert(0): "left", bvert(2): "spare"})


def test_json_roundtrip_preserves_structure_and_labels():
    g = sample()
    back = load_json(dump_json(g))
    assert back == g
    assert back.label(avert(0)) == "left"
    assert back.label(bvert(2)) == "spare"
    assert back.label(avert(1)) == "a1"


def test_json_dict_shape():
    data = to_json_dict(sample())
    assert sorted(data) == ["a", "b", "edges"]
    assert data["a"][0] == "left"
    assert all(len(e) == 2 for e in data["edges"])


def test_dump_is_deterministic():
    assert dump_json(sample()) == dump_json(sample())


def test_load_rejects_bad_json():
    with pytest.raises(FormatError):
        load_json("{not json")


def test_load_rejects_missing_keys():
    with pytest.raises(FormatError):
        from_json_dict({"a": ["x"], "b": []})


def test_load_rejects_out_of_range_indices():
    with pytest.raises(FormatError):
        from_json_dict({"a": ["x"], "b": ["y"], "edges": [[0, 1]]})


def test_load_rejects_duplicate_edges():
    with pytest.raises(FormatError):
        from_json_dict({"a": ["x"], "b": ["y"], "edges": [[0, 0], [0, 0]]})


def test_load_rejects_boolean_indices():
    with pytest.raises(FormatError):
        from_json_dict({"a": ["x"], "b": ["y"], "edges": [[True, 0]]})


def test_load_rejects_non_string_labels():
    with pytest.raises(FormatError):
        from_json_dict({"a": [3], "b": ["y"], "edges": []})


def test_dot_shapes_and_determinism():
    g = sample()
    dot = to_dot(g)
    assert dot == to_dot(g)
    assert "shape=box" in dot
    assert "shape=circle" in dot
    assert 'label="left"' in dot


def test_dot_highlight_and_dashed_styles():
    g = sample()
    hot = [(avert(0), bvert(0))]
    cold = [(avert(1), bvert(2))]
    dot = to_dot(g, highlight=hot, dashed=cold)
    assert "bold" in dot or "red" in dot
    assert "dashed" in dot


def test_dot_highlight_wins_over_dashed():
    g = sample()
    e = [(avert(0), bvert(0))]
    dot = to_dot(g, highlight=e, dashed=e)
    lines = [ln for ln in dot.splitlines() if "a0 -- b0" in ln]
    assert len(lines) == 1
    assert "dashed" not in lines[0]


def test_exported_file_roundtrips_via_real_json():
    text = dump_json(sample())
    parsed = json.loads(text)
    assert from_json_dict(parsed) == sample()
