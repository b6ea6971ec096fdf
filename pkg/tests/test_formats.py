import pytest
from hypothesis import given, settings, strategies as st

from gclab.formats import format_edge_list, format_json, parse_edge_list, parse_json, read_graph, write_graph
from gclab.graph import Graph, GraphError, sample_gnp


def test_edge_list_bases():
    one = parse_edge_list("3 2\n1 2\n2 3\n")
    zero = parse_edge_list("3 2 0\n0 1\n1 2\n")
    assert one == zero == Graph.path(3)


def test_json_bases():
    assert parse_json('{"n": 3, "edges": [[0, 1], [1, 2]], "base": 0}') == Graph.path(3)
    assert parse_json('{"n": 3, "edges": [[1, 2], [2, 3]]}') == Graph.path(3)


@pytest.mark.parametrize(
    "text",
    ["", "3\n", "3 2\n1 2\n", "3 1\n1 1\n", "3 1\n1 4\n", "x y\n", "3 1 2\n1 2\n", "3 1\n1 2 3\n", "3 2\n1 2\n2 1\n"],
)
def test_malformed_edge_lists(text):
    with pytest.raises(GraphError):
        parse_edge_list(text)


def test_malformed_json():
    for text in ["{", '{"edges": []}', '{"n": 2, "edges": [[1]]}']:
        with pytest.raises(GraphError):
            parse_json(text)


def test_missing_file(tmp_path):
    with pytest.raises(GraphError):
        read_graph(tmp_path / "nope.txt")


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 15), st.floats(0, 1), st.integers(0, 2**31))
def test_round_trip(n, p, seed):
    g = sample_gnp(n, p, seed)
    text = format_edge_list(g)
    assert parse_edge_list(text) == g
    assert format_edge_list(parse_edge_list(text)) == text
    js = format_json(g)
    assert parse_json(js) == g and format_json(parse_json(js)) == js


def test_file_round_trip(tmp_path):
    g = sample_gnp(9, 0.4, 1)
    for name in ("g.txt", "g.json"):
        write_graph(g, tmp_path / name)
        assert read_graph(tmp_path / name) == g
