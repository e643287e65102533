"""Commands listing tangles and k-blocks."""

import argparse
import logging

from sepforge.dependencies import emit, resolve_graph
from sepforge.models import ProfileSet
from sepforge.services.profile_service import check_profile_axioms, enumerate_k_blocks, enumerate_tangles

logger = logging.getLogger(__name__)


def tangles(args: argparse.Namespace, out) -> int:
    """Print every tangle of order ``--k``; with ``--check``, their axiom reports."""
    g = resolve_graph(args.graph, args.file)
    found = enumerate_tangles(g, args.k)
    if args.check:
        reports = [check_profile_axioms(g, p) for p in found]
        emit(reports, args.format, out)
        return 0 if all(r.all_passed for r in reports) else 1
    emit(ProfileSet(found), args.format, out)
    return 0


def blocks(args: argparse.Namespace, out) -> int:
    g = resolve_graph(args.graph, args.file)
    emit(enumerate_k_blocks(g, args.k), args.format, out)
    return 0


def register(subparsers, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("tangles", parents=[common], help="list tangles of order k")
    parser.add_argument("graph", help="fixture name or graph file")
    parser.add_argument("--k", type=int, required=True, help="tangle order")
    parser.add_argument("--check", action="store_true", help="print axiom reports instead")
    parser.set_defaults(handler=tangles)

    parser = subparsers.add_parser("blocks", parents=[common], help="list k-blocks")
    parser.add_argument("graph", help="fixture name or graph file")
    parser.add_argument("--k", type=int, required=True, help="block order")
    parser.set_defaults(handler=blocks)
