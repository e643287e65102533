"""Service for profiles: axiom checks, tangles, k-blocks and the distinguishing machinery."""

import itertools
import logging
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from networkx.algorithms.connectivity import local_node_connectivity
import networkx as nx

from sepforge.cache import cache
from sepforge.exceptions import (
    IncompleteProfileError,
    InvalidBlockError,
    InvalidProfileError,
    LemmaViolationError,
    NoKappaError,
    PreconditionError,
    UsageError,
)
from sepforge.models import (
    Corners,
    Graph,
    Profile,
    ProfileSet,
    Separation,
    SeparationSet,
    VertexPermutation,
    VertexSet,
    format_set,
    sorted_sets,
    vertex_set,
)
from sepforge.schemas import AxiomReport
from sepforge.services.graph_service import check_capacity, components, components_within, neighborhood
from sepforge.services.separation_service import (
    corners,
    crossing_number,
    degenerated_separations,
    enumerate_separations,
    is_left_connected,
    is_separation,
)

logger = logging.getLogger(__name__)

MAX_WITNESSES = 5


def orientable_separations(g: Graph, bound: int) -> SeparationSet:
    """Separations a profile of the given bound must orient.

    ``(V, V)`` is its own reverse and cannot be oriented, so it is left out.
    """
    return enumerate_separations(g, bound - 1, "all").filter(lambda s: s.a != s.b)


# ============ Axioms ============

def _check_complete(g: Graph, profile: Profile) -> List[Separation]:
    """Raise unless the profile orients each separation below its bound exactly once.

    Returns:
        Members of the profile that lie outside the universe of the bound.
    """
    universe = orientable_separations(g, profile.bound)
    for s in profile.oriented:
        if not is_separation(g, s):
            raise InvalidProfileError(f"{s!r} is not a separation of {g!r}")
    for s in universe:
        r = s.reverse()
        if s.key > r.key:
            continue
        has_s, has_r = s in profile.oriented, r in profile.oriented
        if has_s and has_r:
            raise InvalidProfileError(f"profile contains both {s!r} and its reverse")
        if not has_s and not has_r:
            raise IncompleteProfileError(f"profile does not orient {s!r} (order {s.order} < {profile.bound})")
    return [s for s in profile.oriented if s not in universe]


@cache.cached()
def check_profile_axioms(g: Graph, profile: Profile) -> AxiomReport:
    """Check (P1), (P2), principality, the order bound and robustness exhaustively.

    Args:
        g: The graph the profile lives on.
        profile: The profile to check.

    Returns:
        AxiomReport with one flag per axiom and robustness per order n <= bound.

    Raises:
        IncompleteProfileError: If a separation below the bound is not oriented.
        InvalidProfileError: If both orientations of a separation are present.
    """
    outside = _check_complete(g, profile)
    oriented = profile.oriented
    members = sorted(oriented, key=lambda s: s.key)
    witnesses: List[str] = []

    def note(message: str) -> None:
        if len(witnesses) < MAX_WITNESSES:
            witnesses.append(message)

    for s in outside:
        note(f"k-profile: {s!r} has order {s.order} >= {profile.bound}")

    consistent = True
    for x in members:
        for y in members:
            small = y.reverse()
            if small != x and small.precedes(x):
                consistent = False
                note(f"P1: {small!r} <= {x!r} but {y!r} is in the profile")
                break
        if not consistent:
            break

    p2 = True
    for x, y in itertools.product(members, repeat=2):
        joined = Separation(x.b & y.b, x.a | y.a)
        if joined in oriented:
            p2 = False
            note(f"P2: {x!r} and {y!r} yield {joined!r} in the profile")
            break

    principal = True
    by_separator: Dict[VertexSet, VertexSet] = {}
    for s in members:
        big = s.b_only
        by_separator[s.separator] = by_separator[s.separator] & big if s.separator in by_separator else big
    for separator, common in by_separator.items():
        if not common:
            principal = False
            note(f"principal: separations with separator {format_set(separator)} share no big component")
            break

    # robust(n): smallest order of a (C, D) producing a violation
    first_violation: Optional[int] = None
    reps = [t for t in enumerate_separations(g, profile.bound, "all") if t.key <= t.reverse().key]
    for x in members:
        for t in reps:
            if first_violation is not None and t.order >= first_violation:
                break
            c1 = Separation(x.b & t.a, x.a | t.b)
            if c1.order >= x.order or c1 not in oriented:
                continue
            c2 = Separation(x.b & t.b, x.a | t.a)
            if c2.order < x.order and c2 in oriented:
                first_violation = t.order
                note(f"robust: {x!r} with {t!r}")
                break
    robust = {
        n: first_violation is None or n < first_violation for n in range(profile.bound + 1)
    }

    return AxiomReport(
        bound=profile.bound,
        consistent=consistent,
        p2=p2,
        principal=principal,
        k_profile=not outside,
        robust=robust,
        witnesses=witnesses,
    )


def require_profile(g: Graph, profile: Profile, robust: bool = False) -> AxiomReport:
    """Check axioms and raise LemmaViolationError if any required flag fails."""
    report = check_profile_axioms(g, profile)
    ok = report.consistent and report.p2 and report.principal and report.k_profile
    if robust:
        ok = ok and report.is_robust
    if not ok:
        raise LemmaViolationError(f"{profile!r} fails its axioms: {'; '.join(report.witnesses)}")
    return report


# ============ Tangles ============

def enumerate_tangles(g: Graph, k: int) -> List[Profile]:
    """Every tangle of order ``k`` of ``g``.

    A tangle picks, for each set X of fewer than k vertices, the component
    C_X of ``g - X`` on the big side (θ2); every separation with separator X
    is then oriented towards C_X (θ3), and C_Y ⊆ C_X whenever X ⊆ Y. The
    search backtracks over the separators in canonical order and prunes
    every choice whose small sides ``V - C_X`` cover ``g`` in a triple (θ1).
    (θ2) is read with |X| <= k-1 so that the demanded separation has order
    below k.

    Raises:
        UsageError: If ``k < 1``.
        CapacityError: If ``g`` exceeds the vertex cap.
    """
    if k < 1:
        raise UsageError("tangle order k must be at least 1")
    check_capacity(g.n, "tangle enumeration")

    separators = [frozenset(c) for size in range(min(k, g.n + 1)) for c in itertools.combinations(range(g.n), size)]
    candidates = {x: components(g, x) for x in separators}

    full_v = (1 << g.n) - 1
    edge_bits = {e: 1 << i for i, e in enumerate(g.sorted_edges)}
    full_e = (1 << len(edge_bits)) - 1
    incident = [0] * g.n
    for (u, v), bit in edge_bits.items():
        incident[u] |= bit
        incident[v] |= bit

    def small_side(c: VertexSet) -> Tuple[int, int]:
        vmask, emask = full_v, full_e
        for v in c:
            vmask &= ~(1 << v)
            emask &= ~incident[v]
        return vmask, emask

    chosen: Dict[VertexSet, VertexSet] = {}
    singles: List[Tuple[int, int]] = []
    unions: List[Tuple[int, int]] = []
    saved: List[int] = []
    found: List[Dict[VertexSet, VertexSet]] = []

    def feasible(x: VertexSet, c: VertexSet) -> Optional[Tuple[int, int]]:
        if any(not c <= chosen[x - {v}] for v in x):
            return None
        vm, em = small_side(c)
        if vm == full_v and em == full_e:
            return None
        for uv, ue in unions:
            if vm | uv == full_v and em | ue == full_e:
                return None
        return vm, em

    def apply(x: VertexSet, c: VertexSet, masks: Tuple[int, int]) -> None:
        saved.append(len(unions))
        vm, em = masks
        unions.append(masks)
        unions.extend((vm | sv, em | se) for sv, se in singles)
        singles.append(masks)
        chosen[x] = c

    def undo(x: VertexSet) -> None:
        del unions[saved.pop():]
        singles.pop()
        del chosen[x]

    iterators = [iter(candidates[separators[0]])] if separators else []
    i = 0
    while i >= 0 and separators:
        if i == len(separators):
            found.append(dict(chosen))
            i -= 1
            undo(separators[i])
            continue
        x = separators[i]
        advanced = False
        for c in iterators[i]:
            masks = feasible(x, c)
            if masks is not None:
                apply(x, c, masks)
                advanced = True
                break
        if advanced:
            i += 1
            if i < len(separators):
                if len(iterators) <= i:
                    iterators.append(None)
                iterators[i] = iter(candidates[separators[i]])
        else:
            i -= 1
            if i >= 0:
                undo(separators[i])

    universe = orientable_separations(g, k)
    tangles = []
    for choice in found:
        oriented = frozenset(s for s in universe if choice[s.separator] <= s.b)
        tangles.append(Profile(k, oriented, provenance="tangle", robust=True))
    logger.info(f"Found {len(tangles)} tangles of order {k} in {g!r}")
    return tangles


def enumerate_tangle_range(g: Graph, low: int, high: int) -> ProfileSet:
    """Maximal tangles among all tangles of orders ``low..high``."""
    everything: List[Profile] = []
    for k in range(low, high + 1):
        everything.extend(enumerate_tangles(g, k))
    return maximal_profiles(everything)


# ============ k-blocks ============

def _inseparable(g: Graph, u: int, v: int, k: int) -> bool:
    if g.has_edge(u, v):
        return True
    return local_node_connectivity(g.nx_graph, u, v) >= k


def enumerate_k_blocks(g: Graph, k: int) -> List[VertexSet]:
    """Maximal sets of at least ``k`` vertices, no two separated by fewer than ``k`` vertices."""
    if k < 1:
        raise UsageError("block order k must be at least 1")
    check_capacity(g.n, "block enumeration")
    linked = nx.Graph()
    linked.add_nodes_from(g.vertices)
    for u, v in itertools.combinations(g.vertices, 2):
        if _inseparable(g, u, v, k):
            linked.add_edge(u, v)
    blocks = [frozenset(c) for c in nx.find_cliques(linked) if len(c) >= k]
    return sorted_sets(blocks)


def block_profile(g: Graph, k: int, b: Iterable[int]) -> Profile:
    """Orient every separation of order below ``k`` towards the side containing ``b``.

    Raises:
        InvalidBlockError: If ``b`` is not a k-block of ``g``.
    """
    b = vertex_set(b)
    if b not in enumerate_k_blocks(g, k):
        raise InvalidBlockError(f"{format_set(b)} is not a {k}-block of {g!r}")
    oriented = frozenset(s for s in orientable_separations(g, k) if b <= s.b)
    return Profile(k, oriented, provenance="block", block=b)


def block_profiles(g: Graph, k: int) -> ProfileSet:
    return ProfileSet(block_profile(g, k, b) for b in enumerate_k_blocks(g, k))


# ============ Distinguishing ============

def distinguishes(s: Separation, p: Profile, q: Profile) -> bool:
    r = s.reverse()
    return (s in p and r in q) or (r in p and s in q)


def distinguishers(p: Profile, q: Profile) -> SeparationSet:
    """Separations in ``p`` whose reverse lies in ``q``."""
    return SeparationSet(s for s in p.oriented if s.reverse() in q.oriented)


def min_distinguishing_order(p: Profile, q: Profile) -> Optional[int]:
    orders = [s.order for s in p.oriented if s.reverse() in q.oriented]
    return min(orders) if orders else None


def distinguishes_efficiently(g: Graph, s: Separation, p: Profile, q: Profile) -> bool:
    """Distinguishes ``p`` and ``q`` and no separation of smaller order does."""
    if not distinguishes(s, p, q):
        return False
    return not any(distinguishes(t, p, q) for t in enumerate_separations(g, s.order - 1, "all"))


def _pairs(profiles: Sequence[Profile]) -> Iterable[Tuple[Profile, Profile]]:
    return itertools.combinations(list(profiles), 2)


def kappa(g: Graph, profiles: Sequence[Profile]) -> int:
    """Minimum order of a separation distinguishing two members of ``profiles``.

    Raises:
        NoKappaError: If fewer than two profiles are given or none can be told apart.
    """
    if len(profiles) < 2:
        raise NoKappaError(f"kappa needs at least two profiles, got {len(profiles)}")
    orders = [o for p, q in _pairs(profiles) if (o := min_distinguishing_order(p, q)) is not None]
    if not orders:
        raise NoKappaError("no separation distinguishes two of the given profiles")
    return min(orders)


def relevant_set(g: Graph, k: int, profiles: Sequence[Profile]) -> SeparationSet:
    """Separations of order at most ``k`` distinguishing some pair of ``profiles``."""
    found = set()
    for p, q in _pairs(profiles):
        for s in p.oriented:
            if s.order <= k and s.reverse() in q.oriented:
                found.add(s)
                found.add(s.reverse())
    return SeparationSet(found)


def efficient_set(g: Graph, profiles: Sequence[Profile]) -> SeparationSet:
    """Separations of order kappa distinguishing some pair efficiently."""
    k = kappa(g, profiles)
    found = set()
    for p, q in _pairs(profiles):
        if min_distinguishing_order(p, q) != k:
            continue
        for s in distinguishers(p, q):
            if s.order == k:
                found.add(s)
                found.add(s.reverse())
    return SeparationSet(found)


def efficient_between(g: Graph, profiles: Sequence[Profile], p: Profile, q: Profile) -> SeparationSet:
    k = kappa(g, profiles)
    if min_distinguishing_order(p, q) != k:
        return SeparationSet()
    found = [s for s in distinguishers(p, q) if s.order == k]
    return SeparationSet(found + [s.reverse() for s in found])


def degenerator(g: Graph, k: int, profiles: Sequence[Profile]) -> SeparationSet:
    """Degenerated separations of all relevant separations of order at most ``k``."""
    found = SeparationSet()
    for s in relevant_set(g, k, profiles):
        found = found.union(degenerated_separations(g, s))
    return found


def is_well_separable(g: Graph, profiles: Sequence[Profile]) -> bool:
    return not degenerator(g, kappa(g, profiles), profiles)


def maximal_profiles(profiles: Iterable[Profile]) -> ProfileSet:
    """Drop every profile whose orientations are contained in another member's."""
    unique = list(dict.fromkeys(profiles))
    kept = [
        p for p in unique
        if not any(p is not q and p.oriented < q.oriented for q in unique)
    ]
    return ProfileSet(kept)


def permutes_profiles(phi: VertexPermutation, profiles: Sequence[Profile]) -> bool:
    """True iff ``phi`` maps the profile set onto itself."""
    return {p.apply(phi) for p in profiles} == set(profiles)


def require_distinguishable_bounds(profiles: Sequence[Profile], k: int) -> None:
    short = [p for p in profiles if p.bound <= k]
    if short:
        raise PreconditionError(f"{short[0]!r} does not orient separations of order {k}")


# ============ Corners and crossing ============

def opposite_corner_pair(
    g: Graph, profiles: Sequence[Profile], s1: Separation, s2: Separation
) -> Tuple[Separation, Separation]:
    """Two opposite corner separations of ``s1``, ``s2`` that are again relevant.

    Raises:
        PreconditionError: If ``s1`` or ``s2`` is not relevant at order kappa.
        LemmaViolationError: If no opposite pair of order kappa is relevant.
    """
    k = kappa(g, profiles)
    require_distinguishable_bounds(profiles, k)
    relevant = relevant_set(g, k, profiles)
    for s in (s1, s2):
        if s not in relevant:
            raise PreconditionError(f"{s!r} does not distinguish two profiles at order {k}")
    cs = corners(s1, s2)
    for x, y in Corners.OPPOSITE:
        cx, cy = cs[x], cs[y]
        if cx.order == k and cy.order == k and cx in relevant and cy in relevant:
            return cx, cy
    raise LemmaViolationError(f"no opposite corners of {s1!r} and {s2!r} are relevant at order {k}")


def component_refine(
    g: Graph, profiles: Sequence[Profile], s: Separation, p: Profile, q: Profile
) -> Separation:
    """Replace ``s`` by ``(X ∪ N(X), V - X)`` for a component X of ``A - B``.

    The first qualifying component by minimum vertex is used.
    """
    if not is_well_separable(g, profiles):
        raise PreconditionError(f"{g!r} is not well-separable for the given profiles")
    between = efficient_between(g, profiles, p, q)
    if s not in between:
        raise PreconditionError(f"{s!r} does not distinguish the pair efficiently")
    for x in components_within(g, s.a_only):
        candidate = Separation(x | neighborhood(g, x), g.vertex_set - x)
        if candidate in between:
            return candidate
    raise LemmaViolationError(f"no component of {format_set(s.a_only)} yields an efficient separation")


def crossing_numbers(g: Graph, profiles: Sequence[Profile]) -> Dict[Separation, int]:
    """Crossing number of each left-connected relevant separation within that set."""
    k = kappa(g, profiles)
    left_connected = [s for s in relevant_set(g, k, profiles) if is_left_connected(g, s)]
    return {s: crossing_number(s, left_connected) for s in left_connected}


def min_crossing_nested_set(g: Graph, profiles: Sequence[Profile]) -> SeparationSet:
    """Left-connected relevant separations of order kappa with minimum crossing number.

    Raises:
        PreconditionError: If ``g`` is not well-separable, a bound is too small or
            nothing is relevant.
        LemmaViolationError: If the result is empty or not nested.
    """
    k = kappa(g, profiles)
    require_distinguishable_bounds(profiles, k)
    if not is_well_separable(g, profiles):
        raise PreconditionError(f"{g!r} is not well-separable for the given profiles")
    if not relevant_set(g, k, profiles):
        raise PreconditionError(f"no separation of order {k} distinguishes the profiles")

    numbers = crossing_numbers(g, profiles)
    if not numbers:
        raise LemmaViolationError(f"no relevant separation of order {k} is left-connected")
    best = min(numbers.values())
    result = SeparationSet(s for s, c in numbers.items() if c == best)
    crossing = result.crossing_pair()
    if crossing is not None:
        raise LemmaViolationError(f"minimum-crossing separations {crossing[0]!r} and {crossing[1]!r} cross")
    logger.debug(f"Minimum crossing number {best} attained by {len(result)} separations")
    return result
