"""Command-line entry point."""

import argparse
import logging
import sys
from typing import List, Optional, TextIO

from pydantic import ValidationError

from sepforge import __description__, __version__
from sepforge.cache import cache
from sepforge.commands import MODULES
from sepforge.config import Settings, reset_settings, set_settings
from sepforge.exceptions import SepforgeError, UsageError
from sepforge.schemas import RunConfig

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s [%(levelname)s] %(name)s: %(message)s'


def setup_logging(settings: Settings) -> None:
    """Send log records to stderr and, if configured, to a log file."""
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if settings.log_file:
        handlers.append(logging.FileHandler(settings.log_file))
    logging.basicConfig(
        level=getattr(logging, settings.log_level, logging.WARNING),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "dot", "text"), default="json", help="output format")
    common.add_argument("--max-vertices", type=int, help="vertex cap (default from SEPFORGE_MAX_VERTICES)")
    common.add_argument("--max-order", type=int, help="cap on enumerated separation orders")
    common.add_argument("--seed", type=int, help="seed for randomised suites")
    common.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    common.add_argument("--file", action="store_true", help="read the graph argument as a file path")

    parser = argparse.ArgumentParser(prog="sepforge", description=__description__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for module in MODULES:
        module.register(subparsers, common)
    return parser


def _apply_overrides(args: argparse.Namespace) -> Settings:
    overrides = {
        "max_vertices": args.max_vertices,
        "max_order": args.max_order,
        "seed": args.seed,
        "log_level": args.log_level,
    }
    overrides = {key: value for key, value in overrides.items() if value is not None}
    try:
        settings = Settings(**overrides)
        RunConfig(
            command=args.command,
            input=args.graph,
            k=getattr(args, "k", None),
            profile_source=getattr(args, "profiles", None),
            output_format=args.format,
            max_vertices=settings.max_vertices,
            max_order=settings.max_order,
            seed=settings.seed,
        )
    except ValidationError as exc:
        first = exc.errors()[0]
        location = ".".join(str(p) for p in first["loc"])
        raise UsageError(f"invalid option {location}: {first['msg']}")
    set_settings(settings)
    return settings


def run(argv: Optional[List[str]] = None, out: Optional[TextIO] = None) -> int:
    """Run one command and return its exit code.

    Args:
        argv: Arguments without the program name; defaults to ``sys.argv[1:]``.
        out: Stream for results; defaults to stdout.

    Returns:
        0 on success, 1 on a failed check, 2 on usage errors, 3 on capacity errors.
    """
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    try:
        settings = _apply_overrides(args)
        setup_logging(settings)
        logger.debug(f"Running {args.command} on {args.graph}")
        return args.handler(args, out)
    except SepforgeError as exc:
        logger.error(f"{type(exc).__name__}: {exc.message}")
        return exc.exit_code
    finally:
        reset_settings()
        cache.clear()


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
