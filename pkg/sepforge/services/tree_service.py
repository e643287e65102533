"""Service for tree-decompositions: building them from nested sets and checking them."""

import itertools
import logging
from typing import Iterable, List, Sequence, Set, Tuple

import networkx as nx

from sepforge.exceptions import LemmaViolationError, PreconditionError
from sepforge.models import (
    Graph,
    NestedSeparationSet,
    Profile,
    Separation,
    SeparationSet,
    Torso,
    TreeDecomposition,
    VertexSet,
    format_set,
    sorted_sets,
)
from sepforge.schemas import TDReport, Violation
from sepforge.services.profile_service import distinguishes, min_distinguishing_order
from sepforge.services.separation_service import check_star_property, is_proper, is_separation
from sepforge.services.torso_service import build_torso

logger = logging.getLogger(__name__)


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)


def _check_nested_input(g: Graph, items: SeparationSet) -> None:
    for s in items:
        if not is_separation(g, s):
            raise PreconditionError(f"{s!r} is not a separation of {g!r}")
        if not is_proper(s):
            raise PreconditionError(f"{s!r} is improper")
    crossing = items.crossing_pair()
    if crossing is not None:
        raise PreconditionError(f"separations {crossing[0]!r} and {crossing[1]!r} cross")
    if not check_star_property(items):
        raise PreconditionError("infinitely many separations lie between two members")


def _predecessors(seps: Sequence[Separation]) -> List[List[bool]]:
    """``pred[i][j]`` iff ``seps[i] < seps[j]`` with nothing strictly between."""
    m = len(seps)
    less = [[i != j and seps[i].precedes(seps[j]) for j in range(m)] for i in range(m)]
    pred = [[False] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            if less[i][j] and not any(less[i][y] and less[y][j] for y in range(m)):
                pred[i][j] = True
    return pred


def build_td_from_nested(g: Graph, nested: Iterable[Separation]) -> TreeDecomposition:
    """Tree-decomposition whose induced separations are exactly ``nested``.

    Nodes are the classes of the relation ``x ~ z`` iff ``x = z`` or the
    reverse of ``x`` is a predecessor of ``z``; each unordered separation
    joins the classes of its two orientations. Node ids follow the
    canonically least separation of each class.

    Raises:
        PreconditionError: If a member is improper, not a separation of ``g``, or
            two members cross.
        LemmaViolationError: If ``~`` is not an equivalence or the result does not
            induce ``nested``.
    """
    items = NestedSeparationSet(nested)
    _check_nested_input(g, items)
    if not items:
        return TreeDecomposition.trivial(g)

    seps = list(items)
    position = {s: i for i, s in enumerate(seps)}
    reverse = [position[s.reverse()] for s in seps]
    pred = _predecessors(seps)
    m = len(seps)

    related = [[i == j or pred[reverse[i]][j] for j in range(m)] for i in range(m)]
    for i, j in itertools.product(range(m), repeat=2):
        if related[i][j] != related[j][i]:
            raise LemmaViolationError(f"relation between {seps[i]!r} and {seps[j]!r} is not symmetric")
    for i, j, k in itertools.product(range(m), repeat=3):
        if related[i][j] and related[j][k] and not related[i][k]:
            raise LemmaViolationError(
                f"relation is not transitive on {seps[i]!r}, {seps[j]!r}, {seps[k]!r}"
            )

    classes = _UnionFind(m)
    for i, j in itertools.product(range(m), repeat=2):
        if related[i][j]:
            classes.union(i, j)
    # union-find roots are the least canonical index of each class
    roots = sorted({classes.find(i) for i in range(m)})
    node_of = {root: node for node, root in enumerate(roots)}

    parts: List[VertexSet] = []
    for root in roots:
        members = [seps[i] for i in range(m) if classes.find(i) == root]
        parts.append(frozenset.intersection(*(s.a for s in members)))
    edges = {
        tuple(sorted((node_of[classes.find(i)], node_of[classes.find(reverse[i])]))) for i in range(m)
    }
    td = TreeDecomposition(tuple(parts), tuple(edges))

    report = verify_td(g, td)
    if not report.ok:
        raise LemmaViolationError(f"decomposition of a nested set fails {', '.join(report.axioms())}")
    if induced_separations(g, td) != items:
        raise LemmaViolationError("decomposition does not induce exactly the given nested set")
    logger.debug(f"Built decomposition with {len(parts)} nodes from {m} separations")
    return td


# ============ Checks ============

def verify_td(g: Graph, td: TreeDecomposition) -> TDReport:
    """Report every violated axiom of ``td`` with a witness.

    Raises:
        StructureError: If the node/edge structure is not a tree.
    """
    td.check_tree()
    violations: List[Violation] = []

    for t, part in enumerate(td.parts):
        stray = part - g.vertex_set
        if stray:
            violations.append(Violation(axiom="parts", witness=f"node {t} holds {format_set(stray)}"))

    covered = frozenset().union(*td.parts)
    for v in sorted(g.vertex_set - covered):
        violations.append(Violation(axiom="T1", witness=f"vertex {v} lies in no part"))

    for u, v in g.sorted_edges:
        if not any(u in part and v in part for part in td.parts):
            violations.append(Violation(axiom="T2", witness=f"edge {u}-{v} lies in no part"))

    for v in sorted(covered & g.vertex_set):
        holders = [t for t in td.nodes if v in td.parts[t]]
        if not nx.is_connected(td.tree.subgraph(holders)):
            violations.append(
                Violation(axiom="T3", witness=f"nodes {holders} holding vertex {v} are not connected")
            )

    if not violations:
        for (u, v), s in td.edge_separations.items():
            if u < v and s.separator != td.adhesion_set(u, v):
                violations.append(
                    Violation(axiom="adhesion", witness=f"edge {u}-{v} has separator {format_set(s.separator)}")
                )
    return TDReport(nodes=len(td.parts), violations=violations)


def induced_separations(g: Graph, td: TreeDecomposition) -> SeparationSet:
    """Separations induced by the tree edges, in both orientations."""
    return SeparationSet(td.edge_separations.values())


def adhesion(td: TreeDecomposition) -> int:
    return max((len(s) for s in td.adhesion_sets), default=0)


def is_k_balanced(td: TreeDecomposition, k: int) -> bool:
    return all(len(s) == k for s in td.adhesion_sets)


def td_distinguishes(g: Graph, td: TreeDecomposition, profiles: Sequence[Profile]) -> List[Tuple[int, int]]:
    """Distinguishable pairs not told apart efficiently by an induced separation."""
    induced = induced_separations(g, td)
    missing = []
    for (i, p), (j, q) in itertools.combinations(enumerate(profiles), 2):
        order = min_distinguishing_order(p, q)
        if order is None:
            continue
        if not any(s.order == order and distinguishes(s, p, q) for s in induced):
            missing.append((i, j))
    return missing


# ============ N-blocks ============

def n_blocks(g: Graph, nested: Iterable[Separation]) -> List[VertexSet]:
    """Maximal vertex sets lying on one side of every member of ``nested``."""
    items = NestedSeparationSet(nested)
    unordered = [s for s in items if s.key <= s.reverse().key]
    found: Set[VertexSet] = set()
    seen: Set[Tuple[int, VertexSet]] = set()
    stack: List[Tuple[int, VertexSet]] = [(0, g.vertex_set)]
    while stack:
        i, current = stack.pop()
        if (i, current) in seen:
            continue
        seen.add((i, current))
        if i == len(unordered):
            found.add(current)
            continue
        s = unordered[i]
        for side in {current & s.a, current & s.b}:
            if side:
                stack.append((i + 1, side))
    blocks = [x for x in found if not any(x < y for y in found)]
    return sorted_sets(blocks)


def n_block_torso(g: Graph, nested: Iterable[Separation], block: Iterable[int]) -> Torso:
    """Torso of an N-block: fill in every separator of ``nested`` it contains."""
    block = frozenset(block)
    separators = {s.separator for s in NestedSeparationSet(nested) if s.separator <= block}
    return build_torso(g, block, separators)


def node_adhesion_sets(td: TreeDecomposition, node: int) -> List[VertexSet]:
    """Adhesion sets of the tree edges at ``node``."""
    return sorted_sets({td.adhesion_set(node, other) for other in td.tree.neighbors(node)})


def part_torso(g: Graph, td: TreeDecomposition, node: int) -> Torso:
    return build_torso(g, td.parts[node], node_adhesion_sets(td, node))
