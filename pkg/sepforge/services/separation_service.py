"""Service for the separation lattice: ordering, nestedness, corners and enumeration."""

import itertools
import logging
from typing import Iterable, List, Optional, Tuple

from sepforge.cache import cache
from sepforge.config import get_settings
from sepforge.exceptions import CapacityError, InvalidSeparationError, UsageError
from sepforge.models import (
    Corners,
    Graph,
    Relation,
    Separation,
    SeparationSet,
    VertexSet,
    format_set,
    vertex_set,
)
from sepforge.services.graph_service import check_capacity, components, components_within, neighborhood

logger = logging.getLogger(__name__)

RESTRICTIONS = ("all", "proper", "left-connected")


def make_separation(g: Graph, a: Iterable[int], b: Iterable[int]) -> Separation:
    """Build the separation ``(a, b)`` of ``g``.

    Raises:
        InvalidSeparationError: If the sides do not cover ``g`` or an edge joins
            ``a - b`` to ``b - a``.
    """
    a, b = vertex_set(a), vertex_set(b)
    stray = (a | b) - g.vertex_set
    if stray:
        raise InvalidSeparationError(f"vertices {format_set(stray)} are not in the graph")
    missing = g.vertex_set - (a | b)
    if missing:
        raise InvalidSeparationError(f"sides do not cover vertex {min(missing)}")
    a_only, b_only = a - b, b - a
    for u, v in g.sorted_edges:
        if (u in a_only and v in b_only) or (u in b_only and v in a_only):
            raise InvalidSeparationError(f"edge {u}-{v} joins {format_set(a_only)} to {format_set(b_only)}")
    return Separation(a, b)


def is_separation(g: Graph, s: Separation) -> bool:
    try:
        make_separation(g, s.a, s.b)
    except InvalidSeparationError:
        return False
    return True


def compare(s1: Separation, s2: Separation) -> Relation:
    if s1 == s2:
        return Relation.EQUAL
    if s1.precedes(s2):
        return Relation.LE
    if s2.precedes(s1):
        return Relation.GE
    return Relation.INCOMPARABLE


def is_nested(s1: Separation, s2: Separation) -> bool:
    """True iff ``s1`` is comparable with ``s2`` or with its reverse."""
    return s1.is_nested_with(s2)


def corners(s1: Separation, s2: Separation) -> Corners:
    """Corner separations ``(E∩F, E'∪F')`` of ``s1 = (A,B)`` and ``s2 = (C,D)``."""
    first = {"A": (s1.a, s1.b), "B": (s1.b, s1.a)}
    second = {"C": (s2.a, s2.b), "D": (s2.b, s2.a)}

    separations = {}
    interiors = {}
    for label in ("AC", "BC", "BD", "AD"):
        e, e_rest = first[label[0]]
        f, f_rest = second[label[1]]
        separations[label] = Separation(e & f, e_rest | f_rest)
        interiors[label] = (e & f) - (e_rest | f_rest)

    centre = s1.a & s1.b & s2.a & s2.b
    links = {
        f"{x}|{y}": (separations[x].a & separations[y].a) - centre
        for x, y in Corners.ADJACENT
    }
    return Corners(separations=separations, centre=centre, links=links, interiors=interiors)


def is_proper(s: Separation) -> bool:
    return bool(s.a_only) and bool(s.b_only)


def is_left_connected(g: Graph, s: Separation) -> bool:
    """True iff ``A - B`` is nonempty and connected."""
    return len(components_within(g, s.a_only)) == 1


def tight_witness(g: Graph, s: Separation) -> Optional[Tuple[VertexSet, VertexSet]]:
    """Components ``C_A ⊆ A-B`` and ``C_B ⊆ B-A`` whose neighbourhoods cover the separator."""
    separator = s.separator
    left = [c for c in components_within(g, s.a_only) if separator <= neighborhood(g, c)]
    right = [c for c in components_within(g, s.b_only) if separator <= neighborhood(g, c)]
    if left and right:
        return left[0], right[0]
    return None


def is_tight(g: Graph, s: Separation) -> bool:
    return tight_witness(g, s) is not None


def degenerated_components(g: Graph, s: Separation) -> List[VertexSet]:
    """Components of ``g - (A∩B)`` whose neighbourhood is a proper subset of the separator."""
    separator = s.separator
    return [c for c in components(g, separator) if neighborhood(g, c) < separator]


def degenerated_separations(g: Graph, s: Separation) -> SeparationSet:
    return SeparationSet(
        Separation(c | neighborhood(g, c), g.vertex_set - c) for c in degenerated_components(g, s)
    )


@cache.cached()
def _enumerate(g: Graph, max_order: int, restrict: str) -> SeparationSet:
    everything = g.vertex_set
    found = []
    for size in range(max_order + 1):
        for combo in itertools.combinations(range(g.n), size):
            x = frozenset(combo)
            comps = components(g, x)
            if restrict == "left-connected":
                found.extend(Separation(x | c, everything - c) for c in comps)
                continue
            for mask in range(1 << len(comps)):
                a, b = set(x), set(x)
                for i, c in enumerate(comps):
                    (a if mask >> i & 1 else b).update(c)
                s = Separation(frozenset(a), frozenset(b))
                if restrict == "proper" and not is_proper(s):
                    continue
                found.append(s)
    logger.debug(f"Enumerated {len(found)} {restrict} separations of order <= {max_order} in {g!r}")
    return SeparationSet(found)


def enumerate_separations(g: Graph, max_order: int, restrict: str = "all") -> SeparationSet:
    """Every oriented separation of order at most ``max_order``.

    Separators are chosen first; each assignment of the components of
    ``g - X`` to the two sides gives one separation.

    Args:
        g: The graph.
        max_order: Largest separator size; values above ``g.n`` are clamped.
        restrict: ``"all"``, ``"proper"`` or ``"left-connected"``.

    Raises:
        CapacityError: If the graph or the order exceeds the configured caps.
    """
    if restrict not in RESTRICTIONS:
        raise UsageError(f"unknown restriction {restrict!r}; expected one of {', '.join(RESTRICTIONS)}")
    if max_order < 0:
        return SeparationSet()
    check_capacity(g.n, "separation enumeration")
    order_cap = get_settings().max_order
    if order_cap is not None and max_order > order_cap:
        raise CapacityError(f"separation order {max_order} exceeds the configured cap of {order_cap}")
    return _enumerate(g, min(max_order, g.n), restrict)


def crossing_set(s: Separation, universe: Iterable[Separation]) -> SeparationSet:
    """Members of ``universe`` that cross ``s``."""
    return SeparationSet(t for t in universe if not s.is_nested_with(t))


def crossing_number(s: Separation, universe: Iterable[Separation]) -> int:
    return sum(1 for t in universe if not s.is_nested_with(t))


def check_star_property(separations: Iterable[Separation]) -> bool:
    """Only finitely many members lie strictly between any two members.

    Every materialised set is finite, so this holds once the input has been
    collected; it is the explicit precondition of ``build_td_from_nested``.
    """
    return True
