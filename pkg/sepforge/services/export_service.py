"""Service for reading and rendering documents: JSON, DOT and plain text."""

import json
import logging
from pathlib import Path
from typing import Any, Iterable, Sequence, Union

from pydantic import BaseModel

from sepforge.exceptions import InvalidProfileError, ParseError, StructureError, UsageError
from sepforge.models import (
    Corners,
    Graph,
    Profile,
    ProfileSet,
    Refinement,
    Separation,
    SeparationSet,
    Torso,
    TotdNode,
    TreeDecomposition,
    TreeOfTreeDecompositions,
    format_set,
)
from sepforge.schemas import (
    CornersSchema,
    GraphSchema,
    ProfileSchema,
    RefinementSubtree,
    RefinementWitnessSchema,
    SeparationSchema,
    TDEdgeSchema,
    TDNodeSchema,
    TorsoSchema,
    TotdNodeSchema,
    TreeDecompositionSchema,
)
from sepforge.services.separation_service import make_separation
from sepforge.utils.validation import detect_document_kind, validate_document

logger = logging.getLogger(__name__)

OUTPUT_FORMATS = ("json", "dot", "text")


# ============ To schemas ============

def graph_to_schema(g: Graph) -> GraphSchema:
    return GraphSchema(n=g.n, edges=list(g.sorted_edges), name=g.name)


def separation_to_schema(s: Separation) -> SeparationSchema:
    return SeparationSchema(A=sorted(s.a), B=sorted(s.b))


def corners_to_schema(c: Corners) -> CornersSchema:
    return CornersSchema(
        separations={label: separation_to_schema(s) for label, s in c.separations.items()},
        centre=sorted(c.centre),
        links={key: sorted(members) for key, members in c.links.items()},
        interiors={label: sorted(members) for label, members in c.interiors.items()},
    )


def profile_to_schema(p: Profile) -> ProfileSchema:
    return ProfileSchema(
        bound=p.bound,
        oriented=[separation_to_schema(s) for s in p.members],
        provenance=p.provenance,
        block=sorted(p.block) if p.block is not None else None,
    )


def td_to_schema(td: TreeDecomposition) -> TreeDecompositionSchema:
    return TreeDecompositionSchema(
        nodes=[TDNodeSchema(id=t, part=sorted(part)) for t, part in enumerate(td.parts)],
        edges=[TDEdgeSchema(u=u, v=v, adhesion=sorted(td.adhesion_set(u, v))) for u, v in td.edges],
    )


def refinement_to_schema(r: Refinement) -> RefinementWitnessSchema:
    """The contraction map as one subtree of fine nodes per coarse node."""
    return RefinementWitnessSchema(
        subtrees=[
            RefinementSubtree(coarse_node=t, fine_nodes=list(members))
            for t, members in enumerate(r.contraction_map)
        ]
    )


def torso_to_schema(t: Torso) -> TorsoSchema:
    return TorsoSchema(
        part=sorted(t.part),
        adhesion_sets=[sorted(s) for s in t.adhesion_sets],
        graph=graph_to_schema(t.graph),
        relabel=list(t.relabel),
    )


def totd_node_to_schema(node: TotdNode, td_node=None, torso=None) -> TotdNodeSchema:
    return TotdNodeSchema(
        level=node.level,
        rule=node.rule,
        graph=graph_to_schema(node.graph),
        td=td_to_schema(node.td),
        profile_ids=list(node.profile_ids),
        td_node=td_node,
        torso=torso_to_schema(torso) if torso is not None else None,
        children=[totd_node_to_schema(c.node, c.td_node, c.torso) for c in node.children],
    )


def totd_to_schema(totd: TreeOfTreeDecompositions) -> TotdNodeSchema:
    return totd_node_to_schema(totd.root)


# ============ From documents ============

def separation_from_dict(g: Graph, data: dict) -> Separation:
    return make_separation(g, data["A"], data["B"])


def separation_set_from_data(g: Graph, data: Any) -> SeparationSet:
    validate_document("separation-set", data)
    return SeparationSet(separation_from_dict(g, item) for item in data)


def profile_from_data(g: Graph, data: Any) -> Profile:
    validate_document("profile", data)
    oriented = frozenset(separation_from_dict(g, item) for item in data["oriented"])
    for s in oriented:
        if s.order >= data["bound"]:
            raise InvalidProfileError(f"{s!r} has order {s.order}, not below the bound {data['bound']}")
    block = frozenset(data["block"]) if data.get("block") is not None else None
    return Profile(data["bound"], oriented, provenance=data.get("provenance", "generic"), block=block)


def profiles_from_data(g: Graph, data: Any) -> ProfileSet:
    validate_document("profiles", data)
    return ProfileSet(profile_from_data(g, item) for item in data)


def td_from_data(data: Any) -> TreeDecomposition:
    """Decomposition from its JSON document; node ids must be ``0..m-1``."""
    validate_document("decomposition", data)
    ids = sorted(node["id"] for node in data["nodes"])
    if ids != list(range(len(ids))):
        raise StructureError(f"decomposition node ids {ids} are not 0..{len(ids) - 1}")
    parts = [None] * len(ids)
    for node in data["nodes"]:
        parts[node["id"]] = frozenset(node["part"])
    td = TreeDecomposition(tuple(parts), tuple((e["u"], e["v"]) for e in data["edges"]))
    for e in data["edges"]:
        if "adhesion" in e and frozenset(e["adhesion"]) != td.adhesion_set(e["u"], e["v"]):
            raise ParseError(f"stated adhesion of edge {e['u']}-{e['v']} differs from the part intersection")
    return td


def read_json(path: Union[str, Path]) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, offset=exc.colno) from exc


def load_document(g: Graph, path: Union[str, Path]):
    """Read a decomposition, separation list or profile document for ``g``.

    Returns:
        Tuple of (kind, object).
    """
    data = read_json(path)
    kind = detect_document_kind(data)
    if kind == "decomposition":
        return kind, td_from_data(data)
    if kind == "separation-set":
        return kind, separation_set_from_data(g, data)
    if kind == "profile":
        return "profiles", ProfileSet([profile_from_data(g, data)])
    if kind == "profiles":
        return kind, profiles_from_data(g, data)
    raise ParseError(f"{kind} documents cannot be loaded here")


# ============ Rendering ============

def _plain(data: Any) -> Any:
    if isinstance(data, BaseModel):
        return data.model_dump(mode="json")
    if isinstance(data, (list, tuple)):
        return [_plain(x) for x in data]
    if isinstance(data, dict):
        return {k: _plain(v) for k, v in data.items()}
    return data


def to_json(data: Any) -> str:
    return json.dumps(_plain(data), indent=2) + "\n"


def _dot_label(text: str) -> str:
    return '"' + text.replace('"', '\\"') + '"'


def graph_to_dot(g: Graph) -> str:
    lines = [f"graph {_dot_label(g.name or 'G')} {{"]
    lines.extend(f"  {v};" for v in g.vertices)
    lines.extend(f"  {u} -- {v};" for u, v in g.sorted_edges)
    lines.append("}")
    return "\n".join(lines) + "\n"


def td_to_dot(td: TreeDecomposition, name: str = "T") -> str:
    lines = [f"graph {_dot_label(name)} {{"]
    lines.extend(f"  t{t} [label={_dot_label(format_set(part))}];" for t, part in enumerate(td.parts))
    lines.extend(
        f"  t{u} -- t{v} [label={_dot_label(format_set(td.adhesion_set(u, v)))}];" for u, v in td.edges
    )
    lines.append("}")
    return "\n".join(lines) + "\n"


def totd_to_dot(totd: TreeOfTreeDecompositions) -> str:
    lines = ['digraph "totd" {']
    counter = 0
    stack = [(totd.root, None)]
    while stack:
        node, parent = stack.pop()
        me = counter
        counter += 1
        parts = " ".join(format_set(p) for p in node.td.parts)
        label = f"level {node.level} ({node.rule})\\n{parts}\\nprofiles {list(node.profile_ids)}"
        lines.append(f"  n{me} [shape=box, label={_dot_label(label)}];")
        if parent is not None:
            lines.append(f"  n{parent} -> n{me};")
        for child in reversed(node.children):
            stack.append((child.node, me))
    lines.append("}")
    return "\n".join(lines) + "\n"


def separations_to_text(separations: Iterable[Separation]) -> str:
    return "".join(f"{s!r} order {s.order}\n" for s in separations)


def td_to_text(td: TreeDecomposition) -> str:
    lines = [f"node {t}: {format_set(part)}" for t, part in enumerate(td.parts)]
    lines.extend(f"edge {u}-{v}: adhesion {format_set(td.adhesion_set(u, v))}" for u, v in td.edges)
    return "\n".join(lines) + "\n"


def profiles_to_text(profiles: Sequence[Profile]) -> str:
    lines = []
    for i, p in enumerate(profiles):
        block = f" block {format_set(p.block)}" if p.block is not None else ""
        lines.append(f"profile {i}: bound {p.bound}, {len(p)} separations, {p.provenance}{block}")
    return "\n".join(lines) + ("\n" if lines else "")


def totd_to_text(totd: TreeOfTreeDecompositions) -> str:
    lines = []
    for node, path in totd.walk():
        indent = "  " * len(path)
        parts = " ".join(format_set(p) for p in node.td.parts)
        lines.append(f"{indent}level {node.level} [{node.rule}] profiles {list(node.profile_ids)}: {parts}")
    return "\n".join(lines) + "\n"


def report_to_text(report: BaseModel) -> str:
    lines = []
    for key, value in report.model_dump(mode="json").items():
        if isinstance(value, list):
            lines.append(f"{key}: {len(value)}")
            lines.extend(f"  {json.dumps(item)}" for item in value)
        else:
            lines.append(f"{key}: {json.dumps(value)}")
    return "\n".join(lines) + "\n"


_RENDERERS = {
    TreeDecomposition: {
        "json": lambda obj: to_json(td_to_schema(obj)),
        "dot": td_to_dot,
        "text": td_to_text,
    },
    TreeOfTreeDecompositions: {
        "json": lambda obj: to_json(totd_to_schema(obj)),
        "dot": totd_to_dot,
        "text": totd_to_text,
    },
    Graph: {
        "json": lambda obj: to_json(graph_to_schema(obj)),
        "dot": graph_to_dot,
        "text": lambda obj: f"{obj!r}\n",
    },
    SeparationSet: {
        "json": lambda obj: to_json([separation_to_schema(s) for s in obj]),
        "text": separations_to_text,
    },
    ProfileSet: {
        "json": lambda obj: to_json([profile_to_schema(p) for p in obj]),
        "text": profiles_to_text,
    },
    Corners: {
        "json": lambda obj: to_json(corners_to_schema(obj)),
        "text": lambda obj: separations_to_text(obj.separations.values()),
    },
    Refinement: {
        "json": lambda obj: to_json(
            {"fine": td_to_schema(obj.fine), "witness": refinement_to_schema(obj)}
        ),
        "dot": lambda obj: td_to_dot(obj.fine),
        "text": lambda obj: td_to_text(obj.fine) + "".join(
            f"coarse {t}: fine {list(members)}\n" for t, members in enumerate(obj.contraction_map)
        ),
    },
}


def render(obj: Any, fmt: str) -> str:
    """Render a result object in one of OUTPUT_FORMATS."""
    if fmt not in OUTPUT_FORMATS:
        raise UsageError(f"unknown output format {fmt!r}")
    for kind, renderers in _RENDERERS.items():
        if isinstance(obj, kind):
            if fmt not in renderers:
                raise UsageError(f"{kind.__name__} has no {fmt} rendering")
            return renderers[fmt](obj)
    if isinstance(obj, BaseModel):
        if fmt == "dot":
            raise UsageError(f"{type(obj).__name__} has no dot rendering")
        return report_to_text(obj) if fmt == "text" else to_json(obj)
    if fmt == "dot":
        raise UsageError("this result has no dot rendering")
    if fmt == "text":
        return "".join(_text_item(x) for x in obj)
    return to_json([sorted(x) if isinstance(x, frozenset) else x for x in obj])


def _text_item(x: Any) -> str:
    if isinstance(x, BaseModel):
        return report_to_text(x)
    if isinstance(x, frozenset):
        return f"{format_set(x)}\n"
    return f"{x}\n"
