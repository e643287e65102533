"""Shared resolution of command inputs: graphs, profile sources and output."""

import logging
from pathlib import Path
from typing import Optional, TextIO

from sepforge.exceptions import ParseError, UsageError
from sepforge.models import Graph, ProfileSet
from sepforge.services.export_service import load_document, render
from sepforge.services.graph_service import FIXTURES, fixture, load_graph_file
from sepforge.services.profile_service import block_profiles, enumerate_tangle_range, enumerate_tangles
from sepforge.utils.validation import parse_profile_source

logger = logging.getLogger(__name__)


def resolve_graph(name: str, force_file: bool = False) -> Graph:
    """Resolve a fixture name or a graph file.

    Fixture names win over paths; a file shadowing a fixture name must be
    requested with ``--file``.

    Raises:
        UsageError: If the name is ambiguous or neither a fixture nor a readable file.
    """
    path = Path(name)
    if force_file:
        if not path.is_file():
            raise UsageError(f"graph file {name!r} does not exist")
        return load_graph_file(path)
    if name in FIXTURES:
        if path.exists():
            raise UsageError(f"{name!r} is both a fixture and a file; pass --file to read the file")
        return fixture(name)
    if path.is_file():
        return load_graph_file(path)
    raise UsageError(f"{name!r} is neither a fixture ({', '.join(FIXTURES)}) nor a file")


def resolve_profiles(g: Graph, argument: Optional[str]) -> ProfileSet:
    """Profiles named by a ``--profiles`` source on ``g``."""
    if argument is None:
        raise UsageError("this command needs --profiles")
    source, low, high, path = parse_profile_source(argument)
    if source == "file":
        kind, profiles = load_document(g, path)
        if kind != "profiles":
            raise ParseError(f"{path} holds a {kind} document, not profiles")
        return profiles
    if source == "blocks":
        return block_profiles(g, low)
    if low == high:
        return ProfileSet(enumerate_tangles(g, low))
    return enumerate_tangle_range(g, low, high)


def emit(obj, fmt: str, out: TextIO) -> None:
    out.write(render(obj, fmt))
