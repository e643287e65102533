"""Service for canonical decompositions and trees of tree-decompositions."""

import itertools
import logging
from typing import Dict, List, Optional, Sequence, Tuple, Union

from sepforge.exceptions import (
    InternalError,
    LemmaViolationError,
    NoKappaError,
    PreconditionError,
)
from sepforge.models import (
    Graph,
    NestedSeparationSet,
    Profile,
    ProfileSet,
    Separation,
    SeparationSet,
    Torso,
    TotdChild,
    TotdNode,
    TreeDecomposition,
    TreeOfTreeDecompositions,
    VertexPermutation,
    VertexSet,
    format_set,
    set_key,
    sorted_sets,
)
from sepforge.schemas import CanonicityReport, PairWitness, SeparationSchema, TotdReport
from sepforge.services.graph_service import automorphisms, neighborhood
from sepforge.services.profile_service import (
    check_profile_axioms,
    distinguishes_efficiently,
    efficient_set,
    is_well_separable,
    kappa,
    min_crossing_nested_set,
    min_distinguishing_order,
    permutes_profiles,
    require_distinguishable_bounds,
)
from sepforge.services.separation_service import (
    degenerated_components,
    enumerate_separations,
    is_left_connected,
    is_proper,
)
from sepforge.services.torso_service import build_torso, induce_profile, lift_separation, lives_in
from sepforge.services.tree_service import (
    adhesion,
    build_td_from_nested,
    induced_separations,
    is_k_balanced,
    n_block_torso,
    n_blocks,
    part_torso,
    td_distinguishes,
    verify_td,
)

logger = logging.getLogger(__name__)


# ============ Degenerate star ============

def degenerate_star(g: Graph, profiles: Sequence[Profile]) -> TreeDecomposition:
    """Star splitting off every degenerated component of an efficient separation.

    The centre (node 0) is ``V`` minus those components; each component C
    becomes a leaf ``C ∪ N(C)``, in order of minimum vertex.

    Raises:
        NoKappaError: If fewer than two distinguishable profiles are given.
        LemmaViolationError: If the components overlap, meet an efficient
            separator, or the star fails its verification.
    """
    k = kappa(g, profiles)
    require_distinguishable_bounds(profiles, k)
    efficient = efficient_set(g, profiles)
    found = sorted_sets({c for s in efficient for c in degenerated_components(g, s)})

    for c1, c2 in itertools.combinations(found, 2):
        if c1 & c2:
            raise LemmaViolationError(f"degenerated components {format_set(c1)} and {format_set(c2)} overlap")
    for c in found:
        for s in efficient:
            if c & s.separator:
                raise LemmaViolationError(
                    f"degenerated component {format_set(c)} meets the separator of {s!r}"
                )

    centre = g.vertex_set.difference(*found)
    parts = (centre,) + tuple(c | neighborhood(g, c) for c in found)
    td = TreeDecomposition(parts, tuple((0, i) for i in range(1, len(parts))))

    report = verify_td(g, td)
    if not report.ok:
        raise LemmaViolationError(f"degenerate star fails {', '.join(report.axioms())}")
    if adhesion(td) >= k:
        raise LemmaViolationError(f"degenerate star has adhesion {adhesion(td)} >= kappa = {k}")
    for s in td.edge_separations.values():
        if not is_proper(s):
            raise LemmaViolationError(f"degenerate star induces the improper separation {s!r}")
    for p in profiles:
        if not lives_in(p, td, 0):
            raise LemmaViolationError(f"{p!r} does not live in the centre {format_set(centre)}")

    torso = part_torso(g, td, 0)
    induced = _dedupe(induce_profile(torso, p, check_hypotheses=False) for p in profiles)
    if not is_well_separable(torso.graph, induced):
        raise LemmaViolationError(f"centre torso on {format_set(centre)} is not well-separable")
    logger.debug(f"Degenerate star of {g!r} has {len(found)} leaves")
    return td


def _dedupe(profiles) -> List[Profile]:
    return list(dict.fromkeys(profiles))


# ============ Canonical k-balanced decomposition ============

def lives_in_block(nested: NestedSeparationSet, block: VertexSet, p: Profile) -> bool:
    return all(s in p for s in nested if block <= s.b)


def _hosts_tight_pair(profiles: Sequence[Profile], k: int) -> bool:
    return any(min_distinguishing_order(p, q) == k for p, q in itertools.combinations(profiles, 2))


def _block_contribution(g: Graph, nested: NestedSeparationSet, block: VertexSet, living: List[Profile], k: int):
    torso = n_block_torso(g, nested, block)
    induced = _dedupe(induce_profile(torso, p, kappa_bound=k, check_hypotheses=False) for p in living)
    try:
        local = kappa(torso.graph, induced)
        if local != k:
            raise LemmaViolationError(
                f"torso of block {format_set(block)} has kappa {local}, expected {k}"
            )
        chosen = min_crossing_nested_set(torso.graph, induced)
    except PreconditionError as exc:
        raise LemmaViolationError(f"torso of block {format_set(block)}: {exc.message}")
    return [lift_separation(torso, s) for s in chosen]


def _require_robust(g: Graph, profiles: Sequence[Profile]) -> None:
    for p in profiles:
        report = check_profile_axioms(g, p)
        if not report.is_robust:
            raise PreconditionError(f"{p!r} is not robust: {'; '.join(report.witnesses)}")


def canonical_nested_set_fixed_k(g: Graph, profiles: Sequence[Profile]) -> NestedSeparationSet:
    """Canonical nested set of left-connected order-kappa separations distinguishing ``profiles``.

    Each round looks at every N-block hosting two profiles still
    distinguishable at order kappa, computes the minimum-crossing nested set
    of its torso and lifts it back; all blocks of a round are handled before
    anything is added.

    Raises:
        PreconditionError: If a profile is not robust or has a bound at most kappa, or if
            ``g`` is not well-separable.
        LemmaViolationError: If a round produces crossing separations or no progress.
        InternalError: If the loop runs longer than the number of candidates.
    """
    if len(profiles) < 2:
        return NestedSeparationSet()
    try:
        k = kappa(g, profiles)
    except NoKappaError:
        return NestedSeparationSet()
    require_distinguishable_bounds(profiles, k)
    _require_robust(g, profiles)
    if not is_well_separable(g, profiles):
        raise PreconditionError(f"{g!r} is not well-separable for the given profiles")

    limit = len(enumerate_separations(g, k, "left-connected")) + 1
    nested = NestedSeparationSet()
    rounds = 0
    while True:
        additions: List[Separation] = []
        qualifying = 0
        for block in n_blocks(g, nested):
            living = [p for p in profiles if lives_in_block(nested, block, p)]
            if not _hosts_tight_pair(living, k):
                continue
            qualifying += 1
            additions.extend(_block_contribution(g, nested, block, living, k))
        if not qualifying:
            break

        grown = nested.union(additions)
        crossing = grown.crossing_pair()
        if crossing is not None:
            raise LemmaViolationError(f"round {rounds + 1} added crossing separations {crossing[0]!r} and {crossing[1]!r}")
        if grown == nested:
            raise LemmaViolationError(f"round {rounds + 1} added nothing for {qualifying} blocks")
        nested = grown
        rounds += 1
        logger.debug(f"Round {rounds}: {qualifying} blocks, {len(nested)} separations")
        if rounds > limit:
            raise InternalError(f"canonical loop exceeded {limit} rounds")

    for s in nested:
        if s.order != k:
            raise LemmaViolationError(f"{s!r} has order {s.order}, expected {k}")
        if not (is_left_connected(g, s) or is_left_connected(g, s.reverse())):
            raise LemmaViolationError(f"neither orientation of {s!r} is left-connected")
    logger.info(f"Canonical nested set of order {k}: {len(nested)} separations after {rounds} rounds")
    return nested


def canonical_td_fixed_k(g: Graph, profiles: Sequence[Profile]) -> TreeDecomposition:
    """k-balanced canonical decomposition distinguishing every kappa-distinguishable pair."""
    nested = canonical_nested_set_fixed_k(g, profiles)
    td = build_td_from_nested(g, nested)
    if len(profiles) >= 2 and nested:
        k = kappa(g, profiles)
        if not is_k_balanced(td, k):
            raise LemmaViolationError(f"canonical decomposition is not {k}-balanced")
        tight = [
            (i, j) for (i, p), (j, q) in itertools.combinations(enumerate(profiles), 2)
            if min_distinguishing_order(p, q) == k
        ]
        missing = set(td_distinguishes(g, td, profiles)) & set(tight)
        if missing:
            raise LemmaViolationError(f"canonical decomposition leaves pairs {sorted(missing)} undistinguished")
    return td


# ============ Tree of tree-decompositions ============

def _level_k(level: int) -> int:
    return (level - 1) // 2 if level % 2 else level // 2


def _trivial_child(node_graph: Graph, profiles: List[Profile], ids: Tuple[int, ...], level: int, limit: int) -> TotdChild:
    torso = build_torso(node_graph, node_graph.vertex_set, [])
    return TotdChild(td_node=0, torso=torso, node=_build_node(level + 1, torso.graph, profiles, ids, limit))


def _build_node(level: int, graph: Graph, profiles: List[Profile], ids: Tuple[int, ...], limit: int) -> TotdNode:
    if len(profiles) <= 1:
        return TotdNode(level, graph, TreeDecomposition.trivial(graph), ProfileSet(profiles), ids)
    if level > limit:
        raise InternalError(f"tree of tree-decompositions exceeded {limit} levels")

    k = _level_k(level)
    local = kappa(graph, profiles)
    logger.debug(f"Level {level} on {graph!r}: k={k}, kappa={local}, {len(profiles)} profiles")

    if level % 2 and local == k + 1:
        td = degenerate_star(graph, profiles)
        torso = part_torso(graph, td, 0)
        induced = [induce_profile(torso, p, check_hypotheses=False) for p in profiles]
        child = TotdChild(td_node=0, torso=torso, node=_build_node(level + 1, torso.graph, induced, ids, limit))
        return TotdNode(level, graph, td, ProfileSet(profiles), ids, rule="star", children=(child,))

    if level % 2 == 0 and local == k:
        td = canonical_td_fixed_k(graph, profiles)
        homes: Dict[int, List[int]] = {t: [] for t in td.nodes}
        for i, p in enumerate(profiles):
            living = [t for t in td.nodes if lives_in(p, td, t)]
            if len(living) != 1:
                raise LemmaViolationError(f"{p!r} lives in {len(living)} parts of the canonical decomposition")
            homes[living[0]].append(i)
        children = []
        for t in td.nodes:
            torso = part_torso(graph, td, t)
            induced = [induce_profile(torso, profiles[i], kappa_bound=k, check_hypotheses=False) for i in homes[t]]
            child_ids = tuple(ids[i] for i in homes[t])
            children.append(TotdChild(t, torso, _build_node(level + 1, torso.graph, induced, child_ids, limit)))
        return TotdNode(level, graph, td, ProfileSet(profiles), ids, rule="canonical", children=tuple(children))

    child = _trivial_child(graph, profiles, ids, level, limit)
    return TotdNode(level, graph, TreeDecomposition.trivial(graph), ProfileSet(profiles), ids, children=(child,))


def build_tree_of_tds(g: Graph, profiles: Sequence[Profile]) -> TreeOfTreeDecompositions:
    """Rooted tree of decompositions distinguishing ``profiles`` efficiently.

    Odd levels ``2k+1`` split off degenerated components when kappa is
    ``k+1``; even levels ``2k`` apply the canonical k-balanced decomposition
    when kappa is ``k``. Every other level is trivial with one child, and a
    node with at most one profile is a leaf.

    Raises:
        PreconditionError: If two profiles are distinguished at order 0 or not at all.
    """
    profiles = ProfileSet(profiles)
    if len(profiles) >= 2 and kappa(g, profiles) == 0:
        raise PreconditionError("profiles distinguished by an order-0 separation have no level")
    limit = 2 * g.n + 3
    root = _build_node(1, g, list(profiles), tuple(range(len(profiles))), limit)
    totd = TreeOfTreeDecompositions(root, profiles)
    logger.info(f"Tree of tree-decompositions for {g!r} has depth {totd.depth}")
    return totd


def lift_to_root(path: Sequence[Torso], s: Separation) -> Separation:
    """Lift a separation of a node graph through the torsos above it."""
    for torso in reversed(path):
        s = lift_separation(torso, s)
    return s


def lifted_separations(totd: TreeOfTreeDecompositions) -> SeparationSet:
    """Every induced separation of every node, lifted to the root graph."""
    found = set()
    for node, path in totd.walk():
        for s in induced_separations(node.graph, node.td):
            found.add(lift_to_root(path, s))
    return SeparationSet(found)


def _check_properties(totd: TreeOfTreeDecompositions) -> List[str]:
    problems = []
    for node, _ in totd.walk():
        k = _level_k(node.level)
        report = verify_td(node.graph, node.td)
        if not report.ok:
            problems.append(f"level {node.level}: decomposition fails {', '.join(report.axioms())}")
        for child in node.children:
            if child.node.level != node.level + 1:
                problems.append(f"level {node.level}: child at level {child.node.level}")
            if child.torso.graph != child.node.graph:
                problems.append(f"level {node.level}: child graph is not the torso of node {child.td_node}")
        if node.level % 2 == 0:
            if not is_k_balanced(node.td, k):
                problems.append(f"level {node.level}: decomposition is not {k}-balanced")
            if node.children and len(node.children) != len(node.td.parts):
                problems.append(
                    f"level {node.level}: {len(node.children)} children for {len(node.td.parts)} parts"
                )
        else:
            if adhesion(node.td) > k:
                problems.append(f"level {node.level}: adhesion {adhesion(node.td)} exceeds {k}")
            if len(node.children) > 1:
                problems.append(f"level {node.level}: {len(node.children)} children at an odd level")
    return problems


def _find_witnesses(g: Graph, profiles: Sequence[Profile], totd: TreeOfTreeDecompositions) -> Dict[Tuple[int, int], PairWitness]:
    witnesses: Dict[Tuple[int, int], PairWitness] = {}
    for node, path in totd.walk():
        local = dict(zip(node.profile_ids, node.profiles))
        for s in induced_separations(node.graph, node.td):
            for a, b in itertools.combinations(sorted(local), 2):
                if (a, b) in witnesses:
                    continue
                if not distinguishes_efficiently(node.graph, s, local[a], local[b]):
                    continue
                lifted = lift_to_root(path, s)
                if distinguishes_efficiently(g, lifted, profiles[a], profiles[b]):
                    witnesses[(a, b)] = PairWitness(
                        first=a,
                        second=b,
                        order=s.order,
                        level=node.level,
                        separation=SeparationSchema(A=sorted(lifted.a), B=sorted(lifted.b)),
                    )
    return witnesses


def verify_totd(
    g: Graph,
    profiles: Sequence[Profile],
    totd: TreeOfTreeDecompositions,
    check_automorphisms: bool = True,
) -> TotdReport:
    """Check efficient distinguishing, the level properties and invariance.

    Violations are report entries; nothing is raised for them.
    """
    profiles = list(profiles)
    witnesses = _find_witnesses(g, profiles, totd)
    missing = [
        (i, j) for (i, p), (j, q) in itertools.combinations(enumerate(profiles), 2)
        if min_distinguishing_order(p, q) is not None and (i, j) not in witnesses
    ]
    report = TotdReport(
        witnesses=[witnesses[key] for key in sorted(witnesses)],
        missing_pairs=missing,
        property_violations=_check_properties(totd),
    )

    if check_automorphisms:
        lifted = lifted_separations(totd)
        for phi in automorphisms(g):
            if not permutes_profiles(phi, profiles):
                continue
            report.automorphisms_checked += 1
            if lifted.apply(phi) != lifted:
                report.automorphism_violations.append(f"automorphism {list(phi.image)} moves the lifted separations")
    if not report.ok:
        logger.warning(f"Tree of tree-decompositions fails verification: {len(missing)} pairs missing")
    return report


# ============ Canonicity ============

def td_signature(td: TreeDecomposition) -> Tuple:
    """Labelling-free description of a decomposition: its parts and part-pairs of edges."""
    parts = tuple(sorted(set_key(p) for p in td.parts))
    edges = tuple(sorted(tuple(sorted((set_key(td.parts[u]), set_key(td.parts[v])))) for u, v in td.edges))
    return parts, edges


def check_canonicity(
    g: Graph,
    obj: Union[SeparationSet, TreeDecomposition],
    profiles: Optional[Sequence[Profile]] = None,
) -> CanonicityReport:
    """Check that every automorphism (permuting ``profiles``, if given) fixes ``obj`` setwise."""
    if isinstance(obj, TreeDecomposition):
        kind = "decomposition"
        original = td_signature(obj)
        moved = lambda phi: td_signature(obj.apply(phi))  # noqa: E731
    else:
        kind = "separation-set"
        original = SeparationSet(obj)
        moved = lambda phi: original.apply(phi)  # noqa: E731

    checked = 0
    for phi in automorphisms(g):
        if profiles is not None and not permutes_profiles(phi, profiles):
            continue
        checked += 1
        if moved(phi) != original:
            return CanonicityReport(kind=kind, automorphisms=checked, invariant=False, witness=str(list(phi.image)))
    return CanonicityReport(kind=kind, automorphisms=checked, invariant=True)


def is_invariant(objects: SeparationSet, perms: Sequence[VertexPermutation]) -> bool:
    return all(objects.apply(phi) == objects for phi in perms)
