"""Service for loading graphs and answering basic structural queries."""

import json
import logging
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Union

import networkx as nx

from sepforge.cache import cache
from sepforge.config import get_settings
from sepforge.exceptions import CapacityError, ParseError, UsageError
from sepforge.models import Graph, VertexPermutation, VertexSet, sorted_sets, vertex_set
from sepforge.utils.validation import validate_document

logger = logging.getLogger(__name__)

GRAPH_FORMATS = ("edge-list", "json")


def check_capacity(n: int, what: str = "graph") -> None:
    """Raise CapacityError if ``n`` vertices exceed the configured cap."""
    cap = get_settings().max_vertices
    if n > cap:
        raise CapacityError(f"{what} has {n} vertices, over the configured cap of {cap}")


# ============ Loading ============

def _decode(data: Union[bytes, str]) -> str:
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError("input is not UTF-8 text", offset=exc.start) from exc


def _parse_edge_list(text: str, name: Optional[str]) -> Graph:
    pairs = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(f"expected 'u v', got {line!r}", line=lineno)
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise ParseError(f"vertex identifiers must be integers, got {line!r}", line=lineno)
        if u < 0 or v < 0:
            raise ParseError(f"negative vertex identifier in {line!r}", line=lineno)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", line=lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(f"parallel edge {u}-{v}", line=lineno)
        seen.add(key)
        pairs.append((u, v))

    # Dense relabelling that keeps the numeric order of the identifiers
    index = {v: i for i, v in enumerate(sorted({v for pair in pairs for v in pair}))}
    check_capacity(len(index))
    return Graph(len(index), frozenset((index[u], index[v]) for u, v in pairs), name=name)


def _parse_json(text: str, name: Optional[str]) -> Graph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, offset=exc.colno) from exc
    validate_document("graph", data)

    n = data["n"]
    check_capacity(n)
    seen = set()
    for i, (u, v) in enumerate(data["edges"]):
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", offset=f"edges[{i}]")
        if u >= n or v >= n:
            raise ParseError(f"edge {u}-{v} has an endpoint outside 0..{n - 1}", offset=f"edges[{i}]")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(f"parallel edge {u}-{v}", offset=f"edges[{i}]")
        seen.add(key)
    return Graph(n, frozenset(seen), name=data.get("name", name))


def load_graph(data: Union[bytes, str], format: str = "edge-list", name: Optional[str] = None) -> Graph:
    """Parse a graph from an edge list or a JSON document.

    Args:
        data: Raw input.
        format: ``"edge-list"`` or ``"json"``.
        name: Optional label for the graph.

    Returns:
        The parsed graph on dense vertex identifiers.

    Raises:
        ParseError: If the input is malformed.
        CapacityError: If the graph exceeds the configured vertex cap.
    """
    if format not in GRAPH_FORMATS:
        raise UsageError(f"unknown graph format {format!r}; expected one of {', '.join(GRAPH_FORMATS)}")
    text = _decode(data)
    graph = _parse_json(text, name) if format == "json" else _parse_edge_list(text, name)
    logger.debug(f"Loaded {graph!r} from {format} input")
    return graph


def load_graph_file(path: Union[str, Path]) -> Graph:
    """Load a graph file, choosing the format from the suffix."""
    path = Path(path)
    fmt = "json" if path.suffix.lower() == ".json" else "edge-list"
    return load_graph(path.read_bytes(), fmt, name=path.stem)


def graph_to_dict(graph: Graph) -> dict:
    data = {"n": graph.n, "edges": [list(e) for e in graph.sorted_edges]}
    if graph.name:
        data["name"] = graph.name
    return data


# ============ Structure ============

@cache.cached()
def _components(graph: Graph, removed: VertexSet) -> tuple:
    view = graph.nx_graph.subgraph(v for v in graph.vertices if v not in removed)
    return tuple(sorted_sets(frozenset(c) for c in nx.connected_components(view)))


def components(g: Graph, removed: Iterable[int] = frozenset()) -> List[VertexSet]:
    """Connected components of ``g - removed``, sorted by minimum vertex."""
    return list(_components(g, vertex_set(removed)))


def components_within(g: Graph, members: Iterable[int]) -> List[VertexSet]:
    """Connected components of the subgraph induced by ``members``."""
    members = vertex_set(members)
    return components(g, g.vertex_set - members)


def neighborhood(g: Graph, s: Iterable[int]) -> VertexSet:
    """Vertices outside ``s`` adjacent to some member of ``s``."""
    s = vertex_set(s)
    adj = g.adjacency
    return frozenset().union(*(adj[v] for v in s)) - s if s else frozenset()


def is_connected_set(g: Graph, members: Iterable[int]) -> bool:
    """True iff ``members`` is nonempty and induces a connected subgraph."""
    members = vertex_set(members)
    return bool(members) and len(components_within(g, members)) == 1


# ============ Automorphisms ============

@cache.cached()
def _automorphisms(g: Graph) -> tuple:
    n = g.n
    adj = g.adjacency
    degree = [len(a) for a in adj]
    signature = [tuple(sorted(degree[w] for w in adj[v])) for v in range(n)]
    candidates = [
        [w for w in range(n) if degree[w] == degree[v] and signature[w] == signature[v]]
        for v in range(n)
    ]

    image = [-1] * n
    used = [False] * n
    found: List[VertexPermutation] = []

    def extend(v: int) -> None:
        if v == n:
            found.append(VertexPermutation(tuple(image)))
            return
        for w in candidates[v]:
            if used[w]:
                continue
            if any((u in adj[v]) != (image[u] in adj[w]) for u in range(v)):
                continue
            image[v] = w
            used[w] = True
            extend(v + 1)
            used[w] = False
        image[v] = -1

    extend(0)
    return tuple(found)


def automorphisms(g: Graph) -> List[VertexPermutation]:
    """All automorphisms of ``g`` in lexicographic order of their images.

    Raises:
        CapacityError: If ``g`` exceeds the configured vertex cap.
    """
    check_capacity(g.n, "automorphism search")
    found = list(_automorphisms(g))
    logger.debug(f"{g!r} has {len(found)} automorphisms")
    return found


# ============ Fixtures ============

def _clique_union(n: int, cliques: Iterable[Iterable[int]], extra=(), name=None) -> Graph:
    edges = set(extra)
    for clique in cliques:
        clique = sorted(clique)
        edges.update((u, v) for i, u in enumerate(clique) for v in clique[i + 1:])
    return Graph(n, frozenset(edges), name=name)


FIXTURES: Dict[str, Callable[[], Graph]] = {
    "P3": lambda: Graph(3, frozenset({(0, 1), (1, 2)}), name="P3"),
    "C4": lambda: Graph(4, frozenset({(0, 1), (1, 2), (2, 3), (0, 3)}), name="C4"),
    "C6": lambda: Graph(6, frozenset((i, (i + 1) % 6) for i in range(6)), name="C6"),
    "K4": lambda: _clique_union(4, [range(4)], name="K4"),
    "TwoK4": lambda: _clique_union(6, [(0, 1, 2, 3), (2, 3, 4, 5)], name="TwoK4"),
    "TwoK4Pendant": lambda: _clique_union(7, [(0, 1, 2, 3), (2, 3, 4, 5)], extra=[(2, 6)], name="TwoK4Pendant"),
    "ThreeK4Path": lambda: _clique_union(8, [(0, 1, 2, 3), (2, 3, 4, 5), (4, 5, 6, 7)], name="ThreeK4Path"),
    "Star13": lambda: Graph(4, frozenset({(0, 1), (0, 2), (0, 3)}), name="Star13"),
}


def fixture(name: str) -> Graph:
    """Return a built-in graph by name."""
    try:
        builder = FIXTURES[name]
    except KeyError:
        raise UsageError(f"unknown fixture {name!r}; known fixtures: {', '.join(FIXTURES)}")
    return builder()


def random_graph(n: int, p: float, seed: int, connected: bool = False) -> Graph:
    """Seeded G(n, p) graph; with ``connected`` the components are chained by their minima."""
    graph = nx.gnp_random_graph(n, p, seed=seed)
    if connected and n > 0:
        minima = sorted(min(c) for c in nx.connected_components(graph))
        graph.add_edges_from(zip(minima, minima[1:]))
    return Graph.from_networkx(graph, name=f"gnp({n},{p},{seed})")
