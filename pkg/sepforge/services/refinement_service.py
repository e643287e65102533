"""Service for tree centres, refinements and gluing trees of tree-decompositions."""

import logging
from collections import deque
from typing import Dict, List, Mapping, Sequence, Set, Tuple

import networkx as nx

from sepforge.exceptions import LemmaViolationError, PreconditionError, StructureError
from sepforge.models import (
    Graph,
    Profile,
    Refinement,
    Torso,
    TotdNode,
    TreeCenter,
    TreeDecomposition,
    TreeOfTreeDecompositions,
    VertexSet,
    format_set,
)
from sepforge.services.decomposition_service import check_canonicity
from sepforge.services.separation_service import is_tight
from sepforge.services.tree_service import part_torso, td_distinguishes, verify_td

logger = logging.getLogger(__name__)


def tree_center(tree: nx.Graph) -> TreeCenter:
    """Central vertex or edge of a finite tree, by repeated leaf removal."""
    if tree.number_of_nodes() == 0:
        raise StructureError("an empty tree has no centre")
    remaining = set(tree.nodes)
    degree = {v: tree.degree(v) for v in remaining}
    leaves = [v for v in remaining if degree[v] <= 1]
    while len(remaining) > 2:
        next_leaves = []
        for leaf in leaves:
            remaining.discard(leaf)
            for w in tree.neighbors(leaf):
                if w in remaining:
                    degree[w] -= 1
                    if degree[w] == 1:
                        next_leaves.append(w)
        leaves = next_leaves
    if len(remaining) == 1:
        return TreeCenter(vertex=next(iter(remaining)))
    u, v = sorted(remaining)
    return TreeCenter(edge=(u, v))


def _holders(td: TreeDecomposition, parts: Tuple[VertexSet, ...], members: VertexSet) -> List[int]:
    """Nodes of the maximal subtree whose parts contain ``members``, grown breadth first."""
    start = next((t for t in td.nodes if members <= parts[t]), None)
    if start is None:
        return []
    seen = {start}
    queue = deque([start])
    while queue:
        t = queue.popleft()
        for w in td.tree.neighbors(t):
            if w not in seen and members <= parts[w]:
                seen.add(w)
                queue.append(w)
    return sorted(seen)


def _check_hypotheses(torso: Torso, td: TreeDecomposition, node: int) -> None:
    report = verify_td(torso.graph, td)
    if not report.ok:
        raise PreconditionError(f"decomposition for node {node} fails {', '.join(report.axioms())}")
    seen = {}
    for u, v in td.edges:
        s = td.edge_separations[(u, v)]
        if not is_tight(torso.graph, s):
            raise PreconditionError(f"separation {torso.separation_to_host(s)!r} at node {node} is not tight")
        key = frozenset({s, s.reverse()})
        if key in seen:
            raise PreconditionError(
                f"tree edges {seen[key]} and {(u, v)} at node {node} induce the same separation"
            )
        seen[key] = (u, v)


def refine_td(
    g: Graph,
    coarse: TreeDecomposition,
    per_node: Mapping[int, TreeDecomposition],
) -> Refinement:
    """Replace every coarse part by a decomposition of its torso.

    ``per_node[t]`` decomposes the torso of part ``t`` in torso coordinates;
    missing entries mean the trivial decomposition. For each coarse edge
    the subtree of parts containing its adhesion set is attached at its
    centre, subdividing a central edge by a node whose part is that edge's
    adhesion set.

    Raises:
        PreconditionError: If a per-node decomposition is invalid, has a
            non-tight separation, or two of its edges induce the same separation.
        LemmaViolationError: If the result is not a refinement.
    """
    coarse.check_tree()
    torsos = {t: part_torso(g, coarse, t) for t in coarse.nodes}
    local = {t: per_node.get(t) or TreeDecomposition.trivial(torsos[t].graph) for t in coarse.nodes}
    for t in coarse.nodes:
        local[t].check_tree()
        if coarse.tree.degree(t) > 0:
            _check_hypotheses(torsos[t], local[t], t)
    host_parts = {t: tuple(torsos[t].to_host(p) for p in local[t].parts) for t in coarse.nodes}

    # attachment per (coarse node, coarse edge): a local node or a subdivided local edge
    attach: Dict[Tuple[int, Tuple[int, int]], Tuple[str, object]] = {}
    subdivided: Dict[int, Set[Tuple[int, int]]] = {t: set() for t in coarse.nodes}
    for edge in coarse.edges:
        adhesion = coarse.adhesion_set(*edge)
        for t in edge:
            holders = _holders(local[t], host_parts[t], adhesion)
            if not holders:
                raise PreconditionError(f"no part at node {t} contains the adhesion set {format_set(adhesion)}")
            centre = tree_center(local[t].tree.subgraph(holders))
            if centre.is_vertex:
                attach[(t, edge)] = ("node", centre.vertex)
            else:
                subdivided[t].add(centre.edge)
                attach[(t, edge)] = ("edge", centre.edge)

    parts: List[VertexSet] = []
    edges: List[Tuple[int, int]] = []
    contraction: List[Tuple[int, ...]] = []
    node_id: Dict[Tuple[int, int], int] = {}
    split_id: Dict[Tuple[int, Tuple[int, int]], int] = {}
    for t in coarse.nodes:
        ids = []
        for x, part in enumerate(host_parts[t]):
            node_id[(t, x)] = len(parts)
            ids.append(len(parts))
            parts.append(part)
        for a, b in sorted(subdivided[t]):
            split_id[(t, (a, b))] = len(parts)
            ids.append(len(parts))
            parts.append(host_parts[t][a] & host_parts[t][b])
        for a, b in local[t].edges:
            if (a, b) in subdivided[t]:
                middle = split_id[(t, (a, b))]
                edges.extend([(node_id[(t, a)], middle), (middle, node_id[(t, b)])])
            else:
                edges.append((node_id[(t, a)], node_id[(t, b)]))
        contraction.append(tuple(ids))

    def resolve(t: int, edge: Tuple[int, int]) -> int:
        kind, where = attach[(t, edge)]
        return node_id[(t, where)] if kind == "node" else split_id[(t, where)]

    for edge in coarse.edges:
        u, v = edge
        edges.append((resolve(u, edge), resolve(v, edge)))

    fine = TreeDecomposition(tuple(parts), tuple(edges))
    refinement = Refinement(coarse=coarse, fine=fine, contraction_map=tuple(contraction))
    report = verify_td(g, fine)
    if not report.ok:
        raise LemmaViolationError(f"refined decomposition fails {', '.join(report.axioms())}")
    problems = verify_refinement(refinement)
    if problems:
        raise LemmaViolationError(f"refined decomposition is not a refinement: {problems[0]}")
    logger.debug(f"Refined {len(coarse.parts)} coarse parts into {len(fine.parts)} parts")
    return refinement


def verify_refinement(refinement: Refinement) -> List[str]:
    """Problems with (R1) contraction and (R2) part unions; empty if none."""
    coarse, fine = refinement.coarse, refinement.fine
    problems = []
    owner: Dict[int, int] = {}
    for t, members in enumerate(refinement.contraction_map):
        for x in members:
            if x in owner:
                problems.append(f"R1: fine node {x} belongs to coarse nodes {owner[x]} and {t}")
            owner[x] = t
        if not members or not nx.is_connected(fine.tree.subgraph(members)):
            problems.append(f"R1: fine nodes {list(members)} of coarse node {t} do not form a subtree")
        union = frozenset().union(*(fine.parts[x] for x in members))
        if union != coarse.parts[t]:
            problems.append(
                f"R2: parts of coarse node {t} join to {format_set(union)}, not {format_set(coarse.parts[t])}"
            )
    if set(owner) != set(fine.nodes):
        problems.append("R1: contraction map does not cover the fine tree")
        return problems
    crossing = sorted(
        tuple(sorted((owner[u], owner[v]))) for u, v in fine.edges if owner[u] != owner[v]
    )
    if crossing != sorted(coarse.edges):
        problems.append(f"R1: contracted edges {crossing} differ from coarse edges {list(coarse.edges)}")
    return problems


def _glue(node: TotdNode) -> TreeDecomposition:
    if not node.children:
        return node.td
    per_node = {child.td_node: _glue(child.node) for child in node.children}
    return refine_td(node.graph, node.td, per_node).fine


def glue_tree_of_tds(g: Graph, totd: TreeOfTreeDecompositions, profiles: Sequence[Profile]) -> TreeDecomposition:
    """Fold a tree of tree-decompositions bottom-up into one decomposition of ``g``.

    The result must tell every distinguishable pair of ``profiles`` apart
    efficiently and be fixed by every automorphism permuting them.

    Raises:
        PreconditionError: If ``totd`` is not rooted at ``g``.
        LemmaViolationError: If the glued decomposition misses a pair or is not canonical.
    """
    if totd.root.graph != g:
        raise PreconditionError(f"tree of tree-decompositions is rooted at {totd.root.graph!r}, not {g!r}")
    glued = _glue(totd.root)
    missing = td_distinguishes(g, glued, profiles)
    if missing:
        raise LemmaViolationError(f"glued decomposition leaves pairs {missing} undistinguished")
    report = check_canonicity(g, glued, profiles)
    if not report.invariant:
        raise LemmaViolationError(f"glued decomposition is moved by automorphism {report.witness}")
    logger.info(f"Glued {totd.depth} levels into a decomposition with {len(glued.parts)} parts")
    return glued


def constituent_adhesion_sets(totd: TreeOfTreeDecompositions) -> Set[VertexSet]:
    """Adhesion sets of all node decompositions, lifted to root coordinates by the torso relabellings."""
    found: Set[VertexSet] = set()
    for node, path in totd.walk():
        for adhesion in node.td.adhesion_sets:
            for torso in reversed(path):
                adhesion = torso.to_host(adhesion)
            found.add(adhesion)
    return found
