import pytest

from epalg.graph import Graph, GraphError, classify_vertices, is_row_finite, paths_up_to


def _strings():
    return Graph.from_edges(["0", "1", "w"], [("a", "0", "w"), ("b", "1", "w")])


def test_from_edges_and_lookup():
    E = _strings()
    assert E.num_vertices == 3 and E.num_edges == 2
    assert E.range[E.edge_index("b")] == E.vertex_index("1")


def test_unknown_vertex_rejected():
    with pytest.raises(GraphError):
        Graph.from_edges(["v"], [("e", "v", "u")])


def test_duplicate_names_rejected():
    with pytest.raises(GraphError):
        Graph(("v", "v"), (), (), ())


def test_paths_of_bouquet():
    E = Graph.from_edges(["v"], [("0", "v", "v"), ("1", "v", "v")])
    paths = paths_up_to(E, 3)
    assert len(paths) == 1 + 2 + 4 + 8


def test_paths_are_composable():
    E = _strings()
    paths = paths_up_to(E, 3)
    # no edge has range w, so no path has length 2
    assert max(len(p.edges) for p in paths) == 1
    for p in paths:
        if p.edges:
            assert E.source[p.edges[-1]] == p.source


def test_classify_sources():
    regular, sources = classify_vertices(_strings())
    assert {_strings().vertices[v] for v in sources} == {"w"}
    assert is_row_finite(_strings())


def test_spec_round_trip():
    E = _strings()
    assert Graph.from_spec(E.to_spec()) == E
