"""Service for torsos: building them and moving separations and profiles across."""

import logging
from typing import Iterable, List, Optional

from sepforge.exceptions import (
    InvalidProfileError,
    InvalidTorsoError,
    LemmaViolationError,
    PreconditionError,
)
from sepforge.models import (
    Graph,
    Profile,
    Separation,
    Torso,
    TreeDecomposition,
    VertexSet,
    format_set,
    sorted_sets,
    vertex_set,
)
from sepforge.services.graph_service import components, neighborhood
from sepforge.services.profile_service import check_profile_axioms, orientable_separations

logger = logging.getLogger(__name__)


def build_torso(g: Graph, part: Iterable[int], adhesion_sets: Iterable[Iterable[int]]) -> Torso:
    """Induced subgraph on ``part`` with every adhesion set made a clique.

    The torso graph is relabelled densely in ascending order of ``part``.

    Raises:
        InvalidTorsoError: If ``part`` leaves the graph or an adhesion set leaves ``part``.
    """
    part = vertex_set(part)
    if not part <= g.vertex_set:
        raise InvalidTorsoError(f"part {format_set(part)} is not a subset of the vertices of {g!r}")
    adhesion = sorted_sets(set(vertex_set(s) for s in adhesion_sets))
    for s in adhesion:
        if not s <= part:
            raise InvalidTorsoError(f"adhesion set {format_set(s)} is not contained in part {format_set(part)}")

    relabel = tuple(sorted(part))
    index = {v: i for i, v in enumerate(relabel)}
    edges = {(index[u], index[v]) for u, v in g.induced_edges(part)}
    for s in adhesion:
        members = sorted(s)
        edges.update((index[u], index[v]) for i, u in enumerate(members) for v in members[i + 1:])

    graph = Graph(len(relabel), frozenset(edges), name=f"torso{format_set(part)}")
    return Torso(host=g, part=part, adhesion_sets=tuple(adhesion), graph=graph, relabel=relabel)


def induce_separation(t: Torso, s: Separation) -> Optional[Separation]:
    """Restriction of a host separation to the torso, in torso coordinates.

    Returns None when ``s`` splits an adhesion set of the torso.
    """
    for adhesion in t.adhesion_sets:
        if not (adhesion <= s.a or adhesion <= s.b):
            return None
    return Separation(t.to_torso(s.a & t.part), t.to_torso(s.b & t.part))


def lift_separation(t: Torso, s_t: Separation) -> Separation:
    """Host separation obtained by adding the components of ``host - part``.

    For ``s_t = (A_t, B_t)``, a component C of ``host - part`` goes to the
    A-side iff ``N(C)`` meets ``A_t - B_t``; every other component, including
    one whose neighbourhood lies inside ``A_t ∩ B_t``, goes to the B-side.
    """
    a, b = t.to_host(s_t.a), t.to_host(s_t.b)
    a_only = a - b
    extra_a, extra_b = set(), set()
    for c in components(t.host, t.part):
        (extra_a if neighborhood(t.host, c) & a_only else extra_b).update(c)
    return Separation(a | extra_a, b | extra_b)


def outside_separations(g: Graph, part: VertexSet) -> List[Separation]:
    """``(C ∪ N(C), V - C)`` for every component C of ``g - part``."""
    return [Separation(c | neighborhood(g, c), g.vertex_set - c) for c in components(g, part)]


def lives_in_part(g: Graph, part: Iterable[int], p: Profile) -> bool:
    """True iff ``p`` orients every component outside ``part`` away from it."""
    part = vertex_set(part)
    for s in outside_separations(g, part):
        if s.order >= p.bound:
            raise PreconditionError(f"{s!r} has order {s.order}, beyond the bound {p.bound} of {p!r}")
        if s not in p:
            return False
    return True


def check_torso_hypotheses(t: Torso) -> None:
    """Require ``N(C) = S`` for each adhesion set S and each component C of ``host - S`` off the part."""
    for adhesion in t.adhesion_sets:
        for c in components(t.host, adhesion):
            if c & t.part:
                continue
            nbrs = neighborhood(t.host, c)
            if nbrs != adhesion:
                raise PreconditionError(
                    f"component {format_set(c)} has neighbourhood {format_set(nbrs)}, "
                    f"not the adhesion set {format_set(adhesion)}"
                )


def induce_profile(
    t: Torso,
    p: Profile,
    kappa_bound: Optional[int] = None,
    check_hypotheses: bool = True,
) -> Profile:
    """The profile ``{s_t : lift(s_t) ∈ p}`` on the torso graph.

    Args:
        t: The torso.
        p: A profile of ``t.host`` living in ``t.part``.
        kappa_bound: If given, every adhesion set must have at most this size.
        check_hypotheses: Require ``N(C) = S`` around every adhesion set.

    Raises:
        PreconditionError: If ``p`` lives elsewhere or a hypothesis fails.
        LemmaViolationError: If the induced orientation is not a profile.
    """
    if kappa_bound is not None:
        for adhesion in t.adhesion_sets:
            if len(adhesion) > kappa_bound:
                raise PreconditionError(f"adhesion set {format_set(adhesion)} is larger than kappa = {kappa_bound}")
    if check_hypotheses:
        check_torso_hypotheses(t)
    if not lives_in_part(t.host, t.part, p):
        raise PreconditionError(f"{p!r} does not live in part {format_set(t.part)}")

    oriented = frozenset(
        s_t for s_t in orientable_separations(t.graph, p.bound) if lift_separation(t, s_t) in p
    )
    induced = Profile(
        p.bound,
        oriented,
        provenance="induced",
        block=t.to_torso(p.block & t.part) if p.block is not None else None,
        robust=p.robust,
    )
    try:
        report = check_profile_axioms(t.graph, induced)
    except InvalidProfileError as exc:
        raise LemmaViolationError(f"profile induced on {format_set(t.part)} is not an orientation: {exc.message}")
    ok = report.consistent and report.p2 and report.principal
    if p.robust:
        ok = ok and report.is_robust
    if not ok:
        raise LemmaViolationError(
            f"profile induced on {format_set(t.part)} fails its axioms: {'; '.join(report.witnesses)}"
        )
    return induced


# ============ Living in decomposition parts ============

def lives_in(p: Profile, td: TreeDecomposition, node: int) -> bool:
    """True iff every edge separation ``(A, B)`` with ``V_node ⊆ B`` lies in ``p``.

    Raises:
        PreconditionError: If an edge separation has order at least the bound of ``p``.
    """
    separations = td.edge_separations
    for s in separations.values():
        if s.order >= p.bound:
            raise PreconditionError(f"decomposition separation {s!r} has order >= {p.bound}")
    part = td.parts[node]
    return all(s in p for s in separations.values() if part <= s.b)


def profile_location(p: Profile, td: TreeDecomposition) -> Optional[int]:
    """The unique node ``p`` lives in, or None."""
    homes = [t for t in td.nodes if lives_in(p, td, t)]
    return homes[0] if len(homes) == 1 else None
