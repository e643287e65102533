"""Property-based tests on small random graphs and trees."""

import itertools

import networkx as nx
from hypothesis import HealthCheck, assume, example, given, settings
from hypothesis import strategies as st

from sepforge.models import Corners, Graph, Separation
from sepforge.services.oracle_service import brute_force_separations
from sepforge.services.refinement_service import tree_center
from sepforge.services.separation_service import corners, enumerate_separations

PROPERTY_SETTINGS = settings(
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
CROSSING_SETTINGS = settings(
    PROPERTY_SETTINGS,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture, HealthCheck.filter_too_much],
)


@st.composite
def small_graphs(draw: st.DrawFn, max_n: int = 6) -> Graph:
    n = draw(st.integers(min_value=1, max_value=max_n))
    pairs = list(itertools.combinations(range(n), 2))
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n, frozenset(edges))


@st.composite
def separation_triples(draw: st.DrawFn):
    g = draw(small_graphs(max_n=5))
    universe = list(enumerate_separations(g, 1))
    picks = draw(st.lists(st.sampled_from(universe), min_size=3, max_size=3))
    return tuple(picks)


@st.composite
def crossing_triples(draw: st.DrawFn):
    """A separation of a sparse graph followed by a crossing pair of the same graph."""
    n = draw(st.integers(min_value=4, max_value=5))
    pairs = list(itertools.combinations(range(n), 2))
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=n))
    universe = list(enumerate_separations(Graph(n, frozenset(edges)), 1))
    crossing = [(s, t) for s, t in itertools.combinations(universe, 2) if not s.is_nested_with(t)]
    assume(crossing)
    s, t = draw(st.sampled_from(crossing))
    return draw(st.sampled_from(universe)), s, t


@st.composite
def prufer_trees(draw: st.DrawFn) -> nx.Graph:
    n = draw(st.integers(min_value=3, max_value=12))
    sequence = draw(st.lists(st.integers(min_value=0, max_value=n - 1), min_size=n - 2, max_size=n - 2))
    return nx.from_prufer_sequence(sequence)


@PROPERTY_SETTINGS
@given(small_graphs())
def test_enumeration_matches_brute_force(g):
    """Separator-first enumeration finds exactly the separations brute force finds."""
    assert enumerate_separations(g, 2) == brute_force_separations(g, 2)


@PROPERTY_SETTINGS
@given(separation_triples())
def test_nestedness_is_symmetric(triple):
    s, t, _ = triple
    assert s.is_nested_with(t) == t.is_nested_with(s)
    assert s.is_nested_with(t) == s.reverse().is_nested_with(t)


# s <= r <= t: r is nested with both, yet the corner BC of the nested pair s, t crosses r
NESTED_PAIR_TRIPLE = (
    Separation({0, 1, 4}, {2, 3}),
    Separation({0}, {1, 2, 3, 4}),
    Separation({0, 1, 2, 4}, {3}),
)


@CROSSING_SETTINGS
@given(crossing_triples())
@example(NESTED_PAIR_TRIPLE)
def test_corners_nested_with_common_nested_separation(triple):
    """A separation nested with two crossing separations is nested with all their corners."""
    r, s, t = triple
    assume(not s.is_nested_with(t))
    assume(r.is_nested_with(s) and r.is_nested_with(t))

    assert all(r.is_nested_with(c) for c in corners(s, t).separations.values())


@CROSSING_SETTINGS
@given(crossing_triples())
@example(NESTED_PAIR_TRIPLE)
def test_adjacent_corners_nested_with_nested_separation(triple):
    """A separation nested with one of two crossing separations is nested with two adjacent corners."""
    r, s, t = triple
    assume(not s.is_nested_with(t))
    assume(r.is_nested_with(s))
    cs = corners(s, t)

    assert any(r.is_nested_with(cs[x]) and r.is_nested_with(cs[y]) for x, y in Corners.ADJACENT)


def test_corner_of_nested_pair_may_cross():
    r, s, t = NESTED_PAIR_TRIPLE

    assert s.is_nested_with(t)
    assert r.is_nested_with(s) and r.is_nested_with(t)
    assert not r.is_nested_with(corners(s, t)["BC"])


@PROPERTY_SETTINGS
@given(prufer_trees())
def test_tree_center_matches_eccentricity(tree):
    centre = tree_center(tree)

    expected = sorted(nx.center(tree))
    if centre.is_vertex:
        assert expected == [centre.vertex]
    else:
        assert expected == list(centre.edge)
