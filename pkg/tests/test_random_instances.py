"""Seeded random instances for the decomposition pipeline."""

import random

import pytest

from sepforge.exceptions import PreconditionError
from sepforge.models import Graph
from sepforge.services.decomposition_service import (
    build_tree_of_tds,
    canonical_td_fixed_k,
    check_canonicity,
    degenerate_star,
    verify_totd,
)
from sepforge.services.graph_service import fixture, random_graph
from sepforge.services.oracle_service import brute_force_separations
from sepforge.services.profile_service import (
    block_profiles,
    enumerate_tangle_range,
    is_well_separable,
    kappa,
)
from sepforge.services.refinement_service import constituent_adhesion_sets, glue_tree_of_tds
from sepforge.services.separation_service import enumerate_separations
from sepforge.services.tree_service import td_distinguishes, verify_td

SEEDS = range(12)

# Efficient separators of the base fixtures; a pendant on one of their vertices is degenerated
ANCHORS = {"TwoK4": (2, 3), "ThreeK4Path": (2, 3, 4, 5)}


def tangle_instance(seed: int):
    g = random_graph(7 + seed % 2, 0.5, seed=seed, connected=True)
    return g, enumerate_tangle_range(g, 2, 4)


def with_pendants(name: str, seed: int):
    """Base fixture plus one to three pendant vertices on separator vertices."""
    base = fixture(name)
    rng = random.Random(seed)
    anchors = [rng.choice(ANCHORS[name]) for _ in range(rng.randint(1, 3))]
    pendants = [(v, base.n + i) for i, v in enumerate(anchors)]
    return base, Graph(base.n + len(pendants), base.edges | frozenset(pendants)), pendants


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("name", sorted(ANCHORS))
def test_degenerate_star_with_planted_pendants(name, seed):
    """Test that every planted pendant becomes its own leaf and the centre is the base graph."""
    base, g, pendants = with_pendants(name, seed)

    td = degenerate_star(g, block_profiles(g, 3))

    assert td.parts == (base.vertex_set,) + tuple(frozenset(edge) for edge in pendants)
    assert td.edges == tuple((0, i) for i in range(1, len(pendants) + 1))


@pytest.mark.parametrize("seed", range(4))
def test_enumeration_matches_brute_force_up_to_ten_vertices(seed):
    g = random_graph(8 + seed % 3, 0.3, seed=seed)

    assert enumerate_separations(g, 2) == brute_force_separations(g, 2)


@pytest.mark.slow
def test_canonical_td_on_random_graphs():
    """Test the fixed-k decomposition on every well-separable random instance with block profiles."""
    checked = 0
    for seed in SEEDS:
        for k, p in ((2, 0.35), (3, 0.5), (4, 0.6)):
            g = random_graph(7 + seed % 2, p, seed=seed, connected=True)
            profiles = block_profiles(g, k)
            if len(profiles) < 2:
                continue
            try:
                kappa(g, profiles)
            except PreconditionError:
                continue
            if not is_well_separable(g, profiles):
                continue

            td = canonical_td_fixed_k(g, profiles)

            assert verify_td(g, td).ok, (g, k)
            assert check_canonicity(g, td, profiles).invariant, (g, k)
            checked += 1
    assert checked > 0


@pytest.mark.slow
@pytest.mark.parametrize("seed", SEEDS)
def test_verify_totd_on_random_graphs(seed):
    """Test the tree of tree-decompositions for the maximal tangles of orders 2 to 4."""
    g, profiles = tangle_instance(seed)
    if len(profiles) < 2:
        pytest.skip(f"{g!r} has fewer than two maximal tangles")

    report = verify_totd(g, profiles, build_tree_of_tds(g, profiles))

    assert report.ok, report


@pytest.mark.slow
@pytest.mark.parametrize("seed", SEEDS)
def test_glue_on_random_graphs(seed):
    """Test that the glued decomposition distinguishes every pair and reuses constituent adhesion sets."""
    g, profiles = tangle_instance(seed)
    if len(profiles) < 2:
        pytest.skip(f"{g!r} has fewer than two maximal tangles")
    totd = build_tree_of_tds(g, profiles)

    glued = glue_tree_of_tds(g, totd, profiles)

    assert verify_td(g, glued).ok
    assert td_distinguishes(g, glued, profiles) == []
    assert check_canonicity(g, glued, profiles).invariant
    assert set(glued.adhesion_sets) <= constituent_adhesion_sets(totd)
