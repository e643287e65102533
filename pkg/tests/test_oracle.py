"""Tests for the brute-force oracles and property suites."""

import random

import pytest

from sepforge.exceptions import CapacityError, PreconditionError, UsageError
from sepforge.models import Graph, Separation
from sepforge.services.graph_service import fixture, random_graph
from sepforge.services.oracle_service import (
    SUITES,
    brute_force_kappa,
    brute_force_separations,
    crossing_inequality_suite,
    random_nested_set,
    run_suite,
)
from sepforge.services.profile_service import block_profiles, opposite_corner_pair

SHARED = Separation({0, 1, 2, 3}, {2, 3, 4, 5})


def test_brute_force_kappa(two_k4, two_k4_blocks):
    """Test that the double loop finds kappa 2 and only the shared-edge separation."""
    k, efficient = brute_force_kappa(two_k4, two_k4_blocks)

    assert k == 2
    assert set(efficient) == {SHARED, SHARED.reverse()}


def test_brute_force_kappa_single_profile(two_k4, two_k4_blocks):
    k, efficient = brute_force_kappa(two_k4, two_k4_blocks[:1])

    assert k is None
    assert len(efficient) == 0


def test_brute_force_capacity():
    with pytest.raises(CapacityError):
        brute_force_separations(Graph(11, frozenset()))


def test_random_nested_set_is_nested(three_k4_path):
    nested = random_nested_set(three_k4_path, 2, random.Random(7))

    assert all(s.is_nested_with(t) for s in nested for t in nested)


@pytest.mark.slow
@pytest.mark.parametrize("name", ["C4", "C6", "TwoK4"])
def test_corner_suite(name):
    """Test that corners behave on every crossing pair of low order."""
    report = run_suite("corners", fixture(name), max_order=2)

    assert report.ok, report.violations
    assert report.suite == "corners"


def test_corner_suite_checks_something(c4):
    assert run_suite("corners", c4, max_order=2).checked > 0


@pytest.mark.parametrize("name", ["P3", "TwoK4", "ThreeK4Path"])
def test_roundtrip_suite(name):
    """Test that random nested sets survive building a decomposition and reading it back."""
    report = run_suite("roundtrip", fixture(name), seed=3, max_order=2)

    assert report.ok, report.violations
    assert report.checked == 20


@pytest.mark.parametrize("name, k", [("P3", 2), ("TwoK4", 3), ("ThreeK4Path", 3)])
def test_efficient_suite(name, k):
    """Test that the engine agrees with brute force on kappa and the efficient set."""
    g = fixture(name)

    report = run_suite("efficient", g, block_profiles(g, k))

    assert report.ok, report.violations


def test_opposite_corners_without_profiles(c4):
    report = run_suite("opposite-corners", c4)

    assert report.ok
    assert report.checked == 0


def test_unknown_suite(c4):
    with pytest.raises(UsageError):
        run_suite("fish", c4)


def test_suite_names():
    assert "efficient" in SUITES
    assert len(SUITES) == 5


@pytest.mark.parametrize("name", ["C4", "C6", "TwoK4", "ThreeK4Path"])
def test_crossing_inequality_suite(name):
    """Test that opposite corners cross strictly fewer separations than the pair they come from."""
    report = run_suite("crossing-inequality", fixture(name), max_order=2)

    assert report.ok, report.violations
    assert report.suite == "crossing-inequality"


@pytest.mark.parametrize("name", ["C4", "C6"])
def test_crossing_inequality_suite_checks_something(name):
    assert run_suite("crossing-inequality", fixture(name), max_order=2).checked > 0


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(4))
def test_crossing_inequality_on_random_graphs(seed):
    """Test the crossing inequality on seeded sparse random graphs."""
    g = random_graph(6 + seed % 2, 0.4, seed=seed)

    report = crossing_inequality_suite(g, max_order=2)

    assert report.ok, report.violations


@pytest.mark.slow
def test_crossing_inequality_on_random_graphs_checks_something():
    checked = sum(crossing_inequality_suite(random_graph(6, 0.3, seed=seed), max_order=2).checked for seed in range(3))

    assert checked > 0


def test_opposite_corner_pair_of_pendant_sides(two_k4_pendant):
    """Test the opposite corners of the two efficient separations differing in the side of vertex 6."""
    profiles = block_profiles(two_k4_pendant, 3)
    s1 = Separation({0, 1, 2, 3}, {2, 3, 4, 5, 6})
    s2 = Separation({0, 1, 2, 3, 6}, {2, 3, 4, 5})

    found = opposite_corner_pair(two_k4_pendant, profiles, s1, s2)

    assert found == (s1, Separation({2, 3, 4, 5}, {0, 1, 2, 3, 6}))
    assert all(c.order == 2 for c in found)


def test_opposite_corner_pair_rejects_irrelevant(two_k4, two_k4_blocks):
    with pytest.raises(PreconditionError):
        opposite_corner_pair(two_k4, two_k4_blocks, SHARED, Separation({0, 1, 2}, {0, 1, 2, 3, 4, 5}))


@pytest.mark.parametrize("name, checked", [("TwoK4", 1), ("TwoK4Pendant", 6), ("ThreeK4Path", 6)])
def test_opposite_corners_suite(name, checked):
    """Test every pair of relevant order-kappa separations against block profiles."""
    g = fixture(name)

    report = run_suite("opposite-corners", g, block_profiles(g, 3))

    assert report.ok, report.violations
    assert report.checked == checked
