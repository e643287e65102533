"""Tests for torsos and the transfer of separations and profiles."""

import pytest

from sepforge.exceptions import InvalidTorsoError, PreconditionError
from sepforge.models import Separation, TreeDecomposition
from sepforge.services.graph_service import fixture
from sepforge.services.profile_service import block_profile, block_profiles, enumerate_tangles, kappa
from sepforge.services.torso_service import (
    build_torso,
    check_torso_hypotheses,
    induce_profile,
    induce_separation,
    lift_separation,
    lives_in,
    lives_in_part,
    outside_separations,
    profile_location,
)

SHARED = Separation({0, 1, 2, 3}, {2, 3, 4, 5})
SHARED_TD = TreeDecomposition(({0, 1, 2, 3}, {2, 3, 4, 5}), ((0, 1),))


def test_build_torso_without_fill_in(two_k4, k4):
    """Test that an adhesion set that is already an edge adds nothing."""
    torso = build_torso(two_k4, {0, 1, 2, 3}, [{2, 3}])

    assert torso.graph == k4
    assert torso.relabel == (0, 1, 2, 3)


def test_build_torso_singleton_adhesion(two_k4_pendant, two_k4):
    torso = build_torso(two_k4_pendant, {0, 1, 2, 3, 4, 5}, [{2}])

    assert torso.graph == two_k4


def test_build_torso_fills_in(c4):
    """Test that the torso of a C6 arc closes the arc into a C4."""
    torso = build_torso(fixture("C6"), {0, 1, 2, 3}, [{0, 3}])

    assert torso.graph == c4


def test_build_torso_relabels_in_ascending_order(two_k4):
    torso = build_torso(two_k4, {2, 3, 4, 5}, [{2, 3}])

    assert torso.relabel == (2, 3, 4, 5)
    assert torso.to_torso({4, 5}) == frozenset({2, 3})
    assert torso.to_host({0, 1}) == frozenset({2, 3})


def test_build_torso_rejects_stray_adhesion(two_k4):
    with pytest.raises(InvalidTorsoError):
        build_torso(two_k4, {0, 1, 2, 3}, [{3, 4}])


def test_build_torso_rejects_foreign_part(two_k4):
    with pytest.raises(InvalidTorsoError):
        build_torso(two_k4, {0, 1, 9}, [])


def test_induce_separation(two_k4):
    """Test restricting the shared-edge separation to the left K4."""
    torso = build_torso(two_k4, {0, 1, 2, 3}, [{2, 3}])

    assert induce_separation(torso, SHARED) == Separation({0, 1, 2, 3}, {2, 3})


def test_induce_separation_splitting_adhesion(two_k4):
    torso = build_torso(two_k4, {0, 1, 2, 3}, [{2, 3}])

    assert induce_separation(torso, Separation({0, 1, 2}, {0, 1, 3, 4, 5})) is None


def test_lift_separation(two_k4_pendant):
    """Test that the pendant vertex joins the side its neighbour lies on."""
    torso = build_torso(two_k4_pendant, {0, 1, 2, 3, 4, 5}, [{2}])
    s_t = Separation({0, 1, 2, 3}, {2, 3, 4, 5})

    lifted = lift_separation(torso, s_t)

    assert lifted == Separation({0, 1, 2, 3}, {2, 3, 4, 5, 6})
    assert induce_separation(torso, lifted) == s_t


def test_lift_separation_to_first_side(two_k4_pendant):
    """Test that a component attached to a vertex of A - B goes to the A-side."""
    torso = build_torso(two_k4_pendant, {0, 1, 2, 3, 4, 5}, [{2}])

    lifted = lift_separation(torso, Separation({0, 1, 2, 3, 4, 5}, {0, 1, 3, 4, 5}))

    assert lifted == Separation({0, 1, 2, 3, 4, 5, 6}, {0, 1, 3, 4, 5})


def test_outside_separations(two_k4_pendant):
    found = outside_separations(two_k4_pendant, frozenset({0, 1, 2, 3, 4, 5}))

    assert found == [Separation({2, 6}, {0, 1, 2, 3, 4, 5})]


def test_induce_block_profile_gives_tangle(two_k4, k4):
    """Test that the block profile of the left K4 induces the K4 tangle on its torso."""
    torso = build_torso(two_k4, {0, 1, 2, 3}, [{2, 3}])
    p = block_profile(two_k4, 3, {0, 1, 2, 3})

    induced = induce_profile(torso, p)

    assert induced == enumerate_tangles(k4, 3)[0]
    assert induced.provenance == "induced"
    assert induced.block == frozenset({0, 1, 2, 3})


def test_induce_profile_living_elsewhere(two_k4):
    torso = build_torso(two_k4, {0, 1, 2, 3}, [{2, 3}])
    q = block_profile(two_k4, 3, {2, 3, 4, 5})

    assert not lives_in_part(two_k4, torso.part, q)
    with pytest.raises(PreconditionError):
        induce_profile(torso, q)


def test_induce_profile_adhesion_over_kappa(two_k4):
    torso = build_torso(two_k4, {0, 1, 2, 3}, [{2, 3}])
    p = block_profile(two_k4, 3, {0, 1, 2, 3})

    with pytest.raises(PreconditionError):
        induce_profile(torso, p, kappa_bound=1)


def test_induced_profiles_keep_kappa(three_k4_path):
    """Test that kappa is unchanged when two profiles move to a torso."""
    left, middle, _ = block_profiles(three_k4_path, 3)
    torso = build_torso(three_k4_path, {0, 1, 2, 3, 4, 5}, [{4, 5}])

    induced = [induce_profile(torso, p) for p in (left, middle)]

    assert kappa(torso.graph, induced) == kappa(three_k4_path, [left, middle]) == 2


def test_check_torso_hypotheses(two_k4_pendant):
    """Test that a component attached to only part of an adhesion set is refused."""
    good = build_torso(two_k4_pendant, {0, 1, 2, 3, 4, 5}, [{2}])
    bad = build_torso(two_k4_pendant, {0, 1, 2, 3, 4, 5}, [{2, 3}])

    check_torso_hypotheses(good)
    with pytest.raises(PreconditionError):
        check_torso_hypotheses(bad)


def test_lives_in(two_k4, two_k4_blocks):
    left, right = two_k4_blocks

    assert lives_in(left, SHARED_TD, 0)
    assert not lives_in(left, SHARED_TD, 1)
    assert profile_location(left, SHARED_TD) == 0
    assert profile_location(right, SHARED_TD) == 1


def test_lives_in_trivial_decomposition(two_k4, two_k4_blocks):
    trivial = TreeDecomposition.trivial(two_k4)

    assert all(lives_in(p, trivial, 0) for p in two_k4_blocks)


def test_lives_in_needs_orientable_edges(two_k4):
    """Test that an edge separation beyond the profile bound is a precondition error."""
    whole = block_profiles(two_k4, 2)[0]

    with pytest.raises(PreconditionError):
        lives_in(whole, SHARED_TD, 0)
