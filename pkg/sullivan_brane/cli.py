"""Command-line interface: sullivan-brane COMMAND MODEL [options]."""

import argparse
import logging
import sys
from typing import List, Optional

from sullivan_brane import __version__
from sullivan_brane.cache import ReportCache, resolve_cache_dir
from sullivan_brane.commands import render_report, run_command
from sullivan_brane.exceptions import ModelParseError
from sullivan_brane.models import (
    COMMANDS,
    DEFAULT_K,
    EXIT_USAGE,
    REPORT_FORMATS,
    CommandFlags,
)
from sullivan_brane.parser import corpus_models, load_model

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

COMMAND_HELP = {
    "validate": "check d^2 = 0, purity, ellipticity and the expected values",
    "cohomology": "dimensions and representatives of H^n up to --max-degree",
    "euler": "Euler characteristic and formal dimension",
    "diagonal-class": "diagonal class and its pullback along the multiplication",
    "jacobian": "Jacobian determinant of a pure model and its class",
    "shriek": "shriek cocycle certificate for --k",
    "vanishing": "vanishing of ev*(omega) times every positive class for --k",
    "compare": "compare the shriek side with the coproduct formula for --k",
}


def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {value}")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("model", help="model file, or the name of a bundled model")
    common.add_argument("--max-degree", type=_nonnegative, default=None, help="degree bound")
    common.add_argument("--k", type=_positive, default=DEFAULT_K, help="sphere dimension (default 1)")
    common.add_argument("--cache-dir", default=None, help="report cache directory")
    common.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")
    common.add_argument("--format", choices=REPORT_FORMATS, default="human", help="report format")
    common.add_argument("--verbose", action="store_true", help="log progress to stderr")

    parser = argparse.ArgumentParser(
        prog="sullivan-brane",
        description="Exact computations on Sullivan models and their sphere-space models.",
        epilog=f"Bundled models: {', '.join(corpus_models())}",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=COMMAND_HELP[name])
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI.

    Args:
        argv: Arguments without the program name; defaults to sys.argv[1:]

    Returns:
        Exit code: 0 pass, 1 mathematical failure, 2 usage or parse error
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format=LOG_FORMAT)

    try:
        spec = load_model(args.model)
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ModelParseError as e:
        print(f"error: {args.model}: {e}", file=sys.stderr)
        return EXIT_USAGE

    cache = None if args.no_cache else ReportCache(resolve_cache_dir(args.cache_dir))
    flags = CommandFlags(max_degree=args.max_degree, k=args.k)
    report, code = run_command(args.command, spec, flags, cache=cache)
    sys.stdout.write(render_report(report, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
