"""Commands building decompositions and exporting documents."""

import argparse
import logging

from sepforge.dependencies import emit, resolve_graph, resolve_profiles
from sepforge.services.decomposition_service import build_tree_of_tds, canonical_td_fixed_k
from sepforge.services.export_service import load_document
from sepforge.services.refinement_service import glue_tree_of_tds

logger = logging.getLogger(__name__)

MODES = ("fixed-k", "totd", "glued")


def decompose(args: argparse.Namespace, out) -> int:
    """Build the decomposition selected by ``--mode`` for the given profiles."""
    g = resolve_graph(args.graph, args.file)
    profiles = resolve_profiles(g, args.profiles)
    logger.info(f"Decomposing {g!r} in mode {args.mode} for {len(profiles)} profiles")

    if args.mode == "fixed-k":
        result = canonical_td_fixed_k(g, profiles)
    else:
        totd = build_tree_of_tds(g, profiles)
        result = totd if args.mode == "totd" else glue_tree_of_tds(g, totd, profiles)
    emit(result, args.format, out)
    return 0


def export(args: argparse.Namespace, out) -> int:
    """Render the graph, or a document about it, in the chosen format."""
    g = resolve_graph(args.graph, args.file)
    if args.document is None:
        emit(g, args.format, out)
    else:
        _, obj = load_document(g, args.document)
        emit(obj, args.format, out)
    return 0


def register(subparsers, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("decompose", parents=[common], help="build a canonical decomposition")
    parser.add_argument("graph", help="fixture name or graph file")
    parser.add_argument("--mode", choices=MODES, default="glued")
    parser.add_argument("--profiles", required=True, help="tangles:k, tangles:i..j, blocks:k or file:<path>")
    parser.set_defaults(handler=decompose)

    parser = subparsers.add_parser("export", parents=[common], help="render a graph or document")
    parser.add_argument("graph", help="fixture name or graph file")
    parser.add_argument("document", nargs="?", help="decomposition, separation list or profile JSON")
    parser.set_defaults(handler=export)
