"""Commands checking documents: decomposition axioms, profile axioms and canonicity."""

import argparse
import logging

from sepforge.dependencies import emit, resolve_graph, resolve_profiles
from sepforge.exceptions import UsageError
from sepforge.schemas import DistinguishingReport
from sepforge.services.decomposition_service import check_canonicity
from sepforge.services.export_service import load_document
from sepforge.services.profile_service import check_profile_axioms
from sepforge.services.tree_service import td_distinguishes, verify_td

logger = logging.getLogger(__name__)


def verify(args: argparse.Namespace, out) -> int:
    """Verify a decomposition (and optionally that it distinguishes profiles) or a profile file.

    Returns:
        0 if every check passes, 1 otherwise.
    """
    g = resolve_graph(args.graph, args.file)
    kind, obj = load_document(g, args.document)

    if kind == "decomposition":
        report = verify_td(g, obj)
        emit(report, args.format, out)
        ok = report.ok
        if args.profiles is not None:
            profiles = resolve_profiles(g, args.profiles)
            distinguishing = DistinguishingReport(
                profiles=len(profiles), undistinguished=td_distinguishes(g, obj, profiles)
            )
            emit(distinguishing, args.format, out)
            ok = ok and distinguishing.ok
        return 0 if ok else 1

    if kind == "profiles":
        reports = [check_profile_axioms(g, p) for p in obj]
        emit(reports, args.format, out)
        return 0 if all(r.consistent and r.p2 and r.principal and r.k_profile for r in reports) else 1

    raise UsageError(f"verify expects a decomposition or profile document, got a {kind} document")


def canonicity(args: argparse.Namespace, out) -> int:
    g = resolve_graph(args.graph, args.file)
    kind, obj = load_document(g, args.document)
    if kind not in ("decomposition", "separation-set"):
        raise UsageError(f"canonicity expects a decomposition or separation list, got a {kind} document")
    profiles = resolve_profiles(g, args.profiles) if args.profiles else None
    report = check_canonicity(g, obj, profiles)
    emit(report, args.format, out)
    return 0 if report.invariant else 1


def register(subparsers, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("verify", parents=[common], help="check a decomposition or profile file")
    parser.add_argument("graph", help="fixture name or graph file")
    parser.add_argument("document", help="decomposition or profile JSON")
    parser.add_argument("--profiles", help="also require efficient distinguishing of these profiles")
    parser.set_defaults(handler=verify)

    parser = subparsers.add_parser("canonicity", parents=[common], help="check automorphism invariance")
    parser.add_argument("graph", help="fixture name or graph file")
    parser.add_argument("document", help="decomposition or separation list JSON")
    parser.add_argument("--profiles", help="only use automorphisms permuting these profiles")
    parser.set_defaults(handler=canonicity)
