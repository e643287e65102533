"""Immutable value types shared by all services.

Vertex sets are frozensets of dense integer identifiers. Anything that is
emitted (JSON, DOT, sorted lists) uses the canonical order: ascending members,
separations by ``(order, sorted A, sorted B)``.
"""

from __future__ import annotations

import enum
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple

import networkx as nx

from sepforge.exceptions import InvalidProfileError, StructureError

VertexSet = FrozenSet[int]


def vertex_set(members: Iterable[int]) -> VertexSet:
    return frozenset(int(v) for v in members)


def set_key(members: Iterable[int]) -> Tuple[int, ...]:
    """Canonical sort key of a vertex set."""
    return tuple(sorted(members))


def sorted_sets(sets: Iterable[VertexSet]) -> List[VertexSet]:
    """Sort vertex sets by minimum element, then lexicographically."""
    return sorted(sets, key=lambda s: (min(s) if s else -1, set_key(s)))


def format_set(members: Iterable[int]) -> str:
    return "{" + ",".join(str(v) for v in sorted(members)) + "}"


# ============ Graphs ============

@dataclass(frozen=True)
class Graph:
    """Finite simple graph on the vertices ``0..n-1``."""

    n: int
    edges: FrozenSet[Tuple[int, int]]
    name: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        normalized = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {u}-{v} has an endpoint outside 0..{self.n - 1}")
            normalized.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(normalized))

    @property
    def vertices(self) -> range:
        return range(self.n)

    @cached_property
    def vertex_set(self) -> VertexSet:
        return frozenset(range(self.n))

    @cached_property
    def adjacency(self) -> Tuple[VertexSet, ...]:
        adj: List[set] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    @cached_property
    def sorted_edges(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(sorted(self.edges))

    @cached_property
    def nx_graph(self) -> nx.Graph:
        """networkx view of the graph; treat as read-only."""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.sorted_edges)
        return graph

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def induced_edges(self, members: VertexSet) -> FrozenSet[Tuple[int, int]]:
        return frozenset(e for e in self.edges if e[0] in members and e[1] in members)

    @classmethod
    def from_networkx(cls, graph: nx.Graph, name: Optional[str] = None) -> "Graph":
        """Build a Graph from networkx, relabelling nodes by sorted order."""
        index = {node: i for i, node in enumerate(sorted(graph.nodes))}
        edges = frozenset((index[u], index[v]) for u, v in graph.edges if u != v)
        return cls(len(index), edges, name=name)

    def __repr__(self) -> str:
        label = f"{self.name}, " if self.name else ""
        return f"Graph({label}n={self.n}, m={len(self.edges)})"


@dataclass(frozen=True)
class VertexPermutation:
    """A bijection of ``0..n-1``, given by its image tuple."""

    image: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "image", tuple(int(v) for v in self.image))
        if sorted(self.image) != list(range(len(self.image))):
            raise ValueError(f"{self.image} is not a permutation")

    @classmethod
    def identity(cls, n: int) -> "VertexPermutation":
        return cls(tuple(range(n)))

    def __call__(self, v: int) -> int:
        return self.image[v]

    @property
    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.image))

    def compose(self, other: "VertexPermutation") -> "VertexPermutation":
        """Return ``self ∘ other`` (apply ``other`` first)."""
        return VertexPermutation(tuple(self.image[v] for v in other.image))

    def inverse(self) -> "VertexPermutation":
        inv = [0] * len(self.image)
        for v, w in enumerate(self.image):
            inv[w] = v
        return VertexPermutation(tuple(inv))

    def apply_set(self, members: Iterable[int]) -> VertexSet:
        return frozenset(self.image[v] for v in members)

    def apply_separation(self, s: "Separation") -> "Separation":
        return Separation(self.apply_set(s.a), self.apply_set(s.b))

    def preserves(self, graph: Graph) -> bool:
        return all(
            (min(self.image[u], self.image[v]), max(self.image[u], self.image[v])) in graph.edges
            for u, v in graph.edges
        )


# ============ Separations ============

class Relation(str, enum.Enum):
    LE = "le"
    GE = "ge"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class Separation:
    """An oriented pair of sides ``(A, B)``.

    Separator and order are derived from the sides. Whether the pair really
    separates a given graph is checked by ``make_separation``.
    """

    a: VertexSet
    b: VertexSet

    def __post_init__(self):
        if not isinstance(self.a, frozenset):
            object.__setattr__(self, "a", vertex_set(self.a))
        if not isinstance(self.b, frozenset):
            object.__setattr__(self, "b", vertex_set(self.b))

    @cached_property
    def separator(self) -> VertexSet:
        return self.a & self.b

    @property
    def order(self) -> int:
        return len(self.separator)

    @cached_property
    def key(self) -> Tuple[int, Tuple[int, ...], Tuple[int, ...]]:
        return (self.order, set_key(self.a), set_key(self.b))

    @cached_property
    def a_only(self) -> VertexSet:
        return self.a - self.b

    @cached_property
    def b_only(self) -> VertexSet:
        return self.b - self.a

    def reverse(self) -> "Separation":
        return Separation(self.b, self.a)

    def precedes(self, other: "Separation") -> bool:
        """``self ≤ other``: A ⊆ C and D ⊆ B."""
        return self.a <= other.a and other.b <= self.b

    def is_nested_with(self, other: "Separation") -> bool:
        if self.precedes(other) or other.precedes(self):
            return True
        flipped = other.reverse()
        return self.precedes(flipped) or flipped.precedes(self)

    def __repr__(self) -> str:
        return f"({format_set(self.a)}|{format_set(self.b)})"


class SeparationSet(Sequence):
    """Duplicate-free, canonically ordered collection of separations."""

    def __init__(self, items: Iterable[Separation] = ()):
        members = frozenset(items)
        self._members = members
        self._items = tuple(sorted(members, key=lambda s: s.key))

    @property
    def members(self) -> FrozenSet[Separation]:
        return self._members

    def __iter__(self) -> Iterator[Separation]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __getitem__(self, index):
        return self._items[index]

    def __contains__(self, s: object) -> bool:
        return s in self._members

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SeparationSet):
            return self._members == other._members
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._members)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({list(self._items)!r})"

    def union(self, *others: Iterable[Separation]) -> "SeparationSet":
        merged = set(self._members)
        for other in others:
            merged.update(other)
        return type(self)(merged)

    def filter(self, predicate) -> "SeparationSet":
        return SeparationSet(s for s in self._items if predicate(s))

    def is_reversal_closed(self) -> bool:
        return all(s.reverse() in self._members for s in self._items)

    def crossing_pair(self) -> Optional[Tuple[Separation, Separation]]:
        """First crossing pair in canonical order, or None if the set is nested."""
        items = self._items
        for i, s in enumerate(items):
            for t in items[i + 1:]:
                if not s.is_nested_with(t):
                    return s, t
        return None

    def apply(self, phi: VertexPermutation) -> "SeparationSet":
        return type(self)(phi.apply_separation(s) for s in self._items)


class NestedSeparationSet(SeparationSet):
    """A separation set stored closed under reversal.

    Nestedness is a precondition checked by the consumers
    (``build_td_from_nested`` and the canonical loop), not on construction.
    """

    def __init__(self, items: Iterable[Separation] = ()):
        items = list(items)
        super().__init__(items + [s.reverse() for s in items])


@dataclass(frozen=True)
class Corners:
    """The four corner separations of a pair ``(A,B)``, ``(C,D)``.

    Keys are ``"AC"``, ``"BC"``, ``"BD"`` and ``"AD"``; ``links`` is keyed by
    adjacent corner pairs such as ``"AC|BC"``.
    """

    separations: Dict[str, Separation]
    centre: VertexSet
    links: Dict[str, VertexSet]
    interiors: Dict[str, VertexSet]

    OPPOSITE = (("AC", "BD"), ("BC", "AD"))
    ADJACENT = (("AC", "BC"), ("BC", "BD"), ("BD", "AD"), ("AD", "AC"))

    def __getitem__(self, label: str) -> Separation:
        return self.separations[label]


# ============ Profiles ============

@dataclass(frozen=True)
class Profile:
    """An explicit orientation of every separation of order below ``bound``.

    Equality only looks at the bound and the chosen orientations.
    """

    bound: int
    oriented: FrozenSet[Separation]
    provenance: str = field(default="generic", compare=False)
    block: Optional[VertexSet] = field(default=None, compare=False)
    robust: Optional[bool] = field(default=None, compare=False)

    def __post_init__(self):
        if not isinstance(self.oriented, frozenset):
            object.__setattr__(self, "oriented", frozenset(self.oriented))

    def __contains__(self, s: object) -> bool:
        return s in self.oriented

    def __len__(self) -> int:
        return len(self.oriented)

    def orientation(self, s: Separation) -> Optional[Separation]:
        """The orientation of ``s`` chosen by the profile, or None."""
        if s in self.oriented:
            return s
        flipped = s.reverse()
        if flipped in self.oriented:
            return flipped
        return None

    @cached_property
    def members(self) -> SeparationSet:
        return SeparationSet(self.oriented)

    def apply(self, phi: VertexPermutation) -> "Profile":
        block = phi.apply_set(self.block) if self.block is not None else None
        return Profile(
            self.bound,
            frozenset(phi.apply_separation(s) for s in self.oriented),
            provenance=self.provenance,
            block=block,
            robust=self.robust,
        )

    def __repr__(self) -> str:
        extra = f", block={format_set(self.block)}" if self.block is not None else ""
        return f"Profile(bound={self.bound}, size={len(self.oriented)}, {self.provenance}{extra})"


class ProfileSet(Sequence):
    """Finite list of profiles of one graph, pairwise distinct as orientations."""

    def __init__(self, members: Iterable[Profile] = ()):
        members = tuple(members)
        if len(set(members)) != len(members):
            raise InvalidProfileError("profile set contains the same orientation twice")
        self._members = members

    def __iter__(self) -> Iterator[Profile]:
        return iter(self._members)

    def __len__(self) -> int:
        return len(self._members)

    def __getitem__(self, index):
        return self._members[index]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ProfileSet):
            return self._members == other._members
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._members)

    def __repr__(self) -> str:
        return f"ProfileSet({list(self._members)!r})"

    def apply(self, phi: VertexPermutation) -> "ProfileSet":
        return ProfileSet(p.apply(phi) for p in self._members)


# ============ Torsos and decompositions ============

@dataclass(frozen=True)
class Torso:
    """A part with clique fill-in on its adhesion sets.

    ``graph`` lives on ``0..len(part)-1``; ``relabel[i]`` is the host vertex of
    torso vertex ``i`` (parts are relabelled in ascending order).
    """

    host: Graph
    part: VertexSet
    adhesion_sets: Tuple[VertexSet, ...]
    graph: Graph
    relabel: Tuple[int, ...]

    @cached_property
    def index(self) -> Dict[int, int]:
        return {v: i for i, v in enumerate(self.relabel)}

    def to_host(self, members: Iterable[int]) -> VertexSet:
        return frozenset(self.relabel[v] for v in members)

    def to_torso(self, members: Iterable[int]) -> VertexSet:
        return frozenset(self.index[v] for v in members)

    def separation_to_host(self, s: Separation) -> Separation:
        return Separation(self.to_host(s.a), self.to_host(s.b))


@dataclass(frozen=True)
class TreeDecomposition:
    """A tree on nodes ``0..len(parts)-1`` with one part per node."""

    parts: Tuple[VertexSet, ...]
    edges: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(vertex_set(p) for p in self.parts))
        normalized = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v or not (0 <= u < len(self.parts) and 0 <= v < len(self.parts)):
                raise StructureError(f"tree edge {u}-{v} is not between two distinct nodes")
            normalized.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", tuple(sorted(normalized)))

    @classmethod
    def trivial(cls, graph: Graph) -> "TreeDecomposition":
        return cls((graph.vertex_set,), ())

    @property
    def nodes(self) -> range:
        return range(len(self.parts))

    @cached_property
    def tree(self) -> nx.Graph:
        """The decomposition tree as networkx graph; treat as read-only."""
        tree = nx.Graph()
        tree.add_nodes_from(self.nodes)
        tree.add_edges_from(self.edges)
        return tree

    def check_tree(self) -> None:
        """Raise StructureError unless the node/edge structure is a tree."""
        if not self.parts:
            raise StructureError("decomposition has no nodes")
        if len(self.edges) != len(self.parts) - 1 or not nx.is_connected(self.tree):
            raise StructureError(
                f"decomposition graph with {len(self.parts)} nodes and {len(self.edges)} edges is not a tree"
            )

    def adhesion_set(self, u: int, v: int) -> VertexSet:
        return self.parts[u] & self.parts[v]

    @cached_property
    def adhesion_sets(self) -> Tuple[VertexSet, ...]:
        return tuple(self.adhesion_set(u, v) for u, v in self.edges)

    def side(self, u: int, v: int) -> FrozenSet[int]:
        """Nodes of the component of ``T - uv`` containing ``u``."""
        tree = self.tree.copy()
        tree.remove_edge(u, v)
        return frozenset(nx.node_connected_component(tree, u))

    def edge_separation(self, u: int, v: int) -> Separation:
        """Separation induced by the tree edge, with the ``u``-side first."""
        u_side = self.side(u, v)
        a = frozenset().union(*(self.parts[t] for t in u_side))
        b = frozenset().union(*(self.parts[t] for t in self.nodes if t not in u_side))
        return Separation(a, b)

    @cached_property
    def edge_separations(self) -> Dict[Tuple[int, int], Separation]:
        separations: Dict[Tuple[int, int], Separation] = {}
        for u, v in self.edges:
            s = self.edge_separation(u, v)
            separations[(u, v)] = s
            separations[(v, u)] = s.reverse()
        return separations

    def apply(self, phi: VertexPermutation) -> "TreeDecomposition":
        return TreeDecomposition(tuple(phi.apply_set(p) for p in self.parts), self.edges)


@dataclass(frozen=True)
class Refinement:
    """A fine decomposition together with the subtrees contracting to the coarse one.

    ``contraction_map[t]`` lists the fine nodes making up coarse node ``t``.
    """

    coarse: TreeDecomposition
    fine: TreeDecomposition
    contraction_map: Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class TreeCenter:
    vertex: Optional[int] = None
    edge: Optional[Tuple[int, int]] = None

    @property
    def is_vertex(self) -> bool:
        return self.vertex is not None


@dataclass(frozen=True)
class TotdNode:
    """One node of a tree of tree-decompositions.

    ``profile_ids`` index into the profile set of the whole structure and run
    parallel to ``profiles`` (the profiles induced on ``graph``).
    """

    level: int
    graph: Graph
    td: TreeDecomposition
    profiles: ProfileSet
    profile_ids: Tuple[int, ...]
    rule: str = "trivial"
    children: Tuple["TotdChild", ...] = ()


@dataclass(frozen=True)
class TotdChild:
    td_node: int
    torso: Torso
    node: TotdNode


@dataclass(frozen=True)
class TreeOfTreeDecompositions:
    root: TotdNode
    profiles: ProfileSet

    def walk(self) -> Iterator[Tuple[TotdNode, Tuple[Torso, ...]]]:
        """Yield every node with the torsos leading to it from the root, depth first."""
        stack: List[Tuple[TotdNode, Tuple[Torso, ...]]] = [(self.root, ())]
        while stack:
            node, path = stack.pop()
            yield node, path
            for child in reversed(node.children):
                stack.append((child.node, path + (child.torso,)))

    @property
    def depth(self) -> int:
        return max(node.level for node, _ in self.walk())
