"""Tests for graph loading, structure queries and automorphisms."""

import networkx as nx
import pytest

from sepforge.exceptions import CapacityError, ParseError, UsageError
from sepforge.models import Graph, VertexPermutation
from sepforge.services.graph_service import (
    FIXTURES,
    automorphisms,
    components,
    components_within,
    fixture,
    graph_to_dict,
    is_connected_set,
    load_graph,
    load_graph_file,
    neighborhood,
    random_graph,
)


def test_load_edge_list():
    """Test parsing a plain edge list with comments and blank lines."""
    g = load_graph("# a path\n0 1\n\n1 2  # second edge\n")

    assert g.n == 3
    assert g.sorted_edges == ((0, 1), (1, 2))


def test_load_edge_list_relabels_densely():
    """Test that sparse identifiers keep their order after relabelling."""
    g = load_graph("10 30\n30 20\n")

    assert g.n == 3
    assert g.sorted_edges == ((0, 2), (1, 2))


@pytest.mark.parametrize("text, line", [
    ("0 1\nfoo bar\n", 2),
    ("0 1\n1 2 3\n", 2),
    ("2 2\n", 1),
    ("0 1\n1 0\n", 2),
    ("-1 0\n", 1),
])
def test_load_edge_list_errors(text, line):
    """Test that malformed edge lists report the offending line."""
    with pytest.raises(ParseError) as exc_info:
        load_graph(text)

    assert exc_info.value.line == line
    assert exc_info.value.exit_code == 2


def test_load_json():
    """Test parsing a JSON graph document."""
    g = load_graph('{"n": 4, "edges": [[0, 1], [2, 3]], "name": "pair"}', format="json")

    assert g.n == 4
    assert g.name == "pair"
    assert len(g.edges) == 2


def test_load_json_isolated_vertices():
    """Test that JSON input keeps vertices without edges."""
    g = load_graph('{"n": 3, "edges": []}', format="json")

    assert g.n == 3
    assert components(g) == [frozenset({0}), frozenset({1}), frozenset({2})]


@pytest.mark.parametrize("text", [
    '{"edges": []}',
    '{"n": 2, "edges": [[0, 5]]}',
    '{"n": 2, "edges": [[1, 1]]}',
    '{"n": 2, "edges": [[0, 1], [1, 0]]}',
    '{"n": 2, "edges": [[0]]}',
    '{"n": 2,',
])
def test_load_json_errors(text):
    """Test that invalid JSON graph documents are rejected."""
    with pytest.raises(ParseError):
        load_graph(text, format="json")


def test_load_unknown_format():
    with pytest.raises(UsageError):
        load_graph("0 1\n", format="graphml")


def test_load_rejects_non_utf8():
    with pytest.raises(ParseError):
        load_graph(b"0 1\n\xff\xfe\n")


def test_capacity_from_environment(monkeypatch):
    """Test that SEPFORGE_MAX_VERTICES caps the graphs that can be loaded."""
    monkeypatch.setenv("SEPFORGE_MAX_VERTICES", "3")

    with pytest.raises(CapacityError) as exc_info:
        load_graph("0 1\n1 2\n2 3\n")

    assert exc_info.value.exit_code == 3


def test_load_graph_file(tmp_path):
    """Test that the file suffix selects the format."""
    edge_file = tmp_path / "triangle.txt"
    edge_file.write_text("0 1\n1 2\n0 2\n")
    json_file = tmp_path / "pair.json"
    json_file.write_text('{"n": 2, "edges": [[0, 1]]}')

    triangle = load_graph_file(edge_file)
    pair = load_graph_file(json_file)

    assert triangle.name == "triangle"
    assert len(triangle.edges) == 3
    assert pair.n == 2


def test_graph_to_dict_roundtrip(two_k4):
    data = graph_to_dict(two_k4)

    assert data["name"] == "TwoK4"
    assert Graph(data["n"], frozenset(map(tuple, data["edges"]))) == two_k4


def test_graph_rejects_bad_edges():
    """Test that the value type refuses loops and out-of-range endpoints."""
    with pytest.raises(ValueError):
        Graph(3, frozenset({(1, 1)}))
    with pytest.raises(ValueError):
        Graph(3, frozenset({(0, 3)}))


def test_components(two_k4):
    """Test components after removing the shared edge of TwoK4."""
    assert components(two_k4, {2, 3}) == [frozenset({0, 1}), frozenset({4, 5})]
    assert components(two_k4) == [two_k4.vertex_set]


def test_components_match_networkx():
    """Test components against networkx on a seeded random graph."""
    g = random_graph(12, 0.15, seed=7)
    expected = sorted(sorted(c) for c in nx.connected_components(g.nx_graph))

    assert sorted(sorted(c) for c in components(g)) == expected


def test_components_within(two_k4_pendant):
    assert components_within(two_k4_pendant, {0, 1, 6}) == [frozenset({0, 1}), frozenset({6})]


def test_neighborhood(two_k4_pendant):
    assert neighborhood(two_k4_pendant, {0, 1}) == frozenset({2, 3})
    assert neighborhood(two_k4_pendant, {6}) == frozenset({2})
    assert neighborhood(two_k4_pendant, set()) == frozenset()


def test_is_connected_set(two_k4):
    assert is_connected_set(two_k4, {0, 2, 4})
    assert not is_connected_set(two_k4, {0, 4})
    assert not is_connected_set(two_k4, set())


@pytest.mark.parametrize("name, count", [
    ("P3", 2),
    ("C4", 8),
    ("C6", 12),
    ("K4", 24),
    ("Star13", 6),
    ("TwoK4", 16),
    ("ThreeK4Path", 32),
])
def test_automorphism_counts(name, count):
    """Test automorphism group orders of the fixtures."""
    g = fixture(name)
    found = automorphisms(g)

    assert len(found) == count
    assert found[0].is_identity
    assert all(phi.preserves(g) for phi in found)


def test_automorphisms_form_a_group(two_k4):
    """Test closure under composition and inverses."""
    found = automorphisms(two_k4)
    images = {phi.image for phi in found}

    assert VertexPermutation.identity(two_k4.n) in found
    assert all(phi.compose(psi).image in images for phi in found for psi in found)
    assert all(phi.compose(phi.inverse()).is_identity for phi in found)


def test_automorphisms_respect_capacity(monkeypatch):
    monkeypatch.setenv("SEPFORGE_MAX_VERTICES", "4")

    with pytest.raises(CapacityError):
        automorphisms(fixture("C6"))


def test_fixtures_are_named():
    for name in FIXTURES:
        assert fixture(name).name == name


def test_unknown_fixture():
    with pytest.raises(UsageError):
        fixture("Petersen")


def test_random_graph_is_seeded():
    """Test that the same seed gives the same graph and chaining connects it."""
    first = random_graph(10, 0.2, seed=3, connected=True)
    second = random_graph(10, 0.2, seed=3, connected=True)

    assert first == second
    assert nx.is_connected(first.nx_graph)
