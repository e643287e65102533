"""Command running the brute-force property suites."""

import argparse
import logging

from sepforge.config import get_settings
from sepforge.dependencies import emit, resolve_graph, resolve_profiles
from sepforge.models import ProfileSet
from sepforge.services.oracle_service import SUITES, run_suite

logger = logging.getLogger(__name__)

PROFILE_SUITES = ("opposite-corners", "efficient")


def oracle(args: argparse.Namespace, out) -> int:
    g = resolve_graph(args.graph, args.file)
    profiles = ProfileSet()
    if args.check in PROFILE_SUITES:
        profiles = resolve_profiles(g, args.profiles or "tangles:1..3")
    report = run_suite(args.check, g, profiles, seed=get_settings().seed, max_order=args.order)
    emit(report, args.format, out)
    if not report.ok:
        logger.warning(f"Suite {args.check} found {len(report.violations)} violations on {g!r}")
    return 0 if report.ok else 1


def register(subparsers, common: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser("oracle", parents=[common], help="run a brute-force property suite")
    parser.add_argument("graph", help="fixture name or graph file")
    parser.add_argument("--check", choices=SUITES, required=True)
    parser.add_argument("--profiles", help="profiles for the opposite-corners and efficient suites")
    parser.add_argument("--order", type=int, default=3, help="largest separation order examined")
    parser.set_defaults(handler=oracle)
