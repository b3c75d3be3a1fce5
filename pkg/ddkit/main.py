import argparse
import logging
import sys
from typing import List, Optional

from ddkit import __version__
from ddkit.commands import filters, fit, history, lambdas, run, seq
from ddkit.exceptions import CommandError
from ddkit.utils import configure_logging

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ddkit",
        description="Dynamical-decoupling sequences and numerical checks of their decoupling orders",
    )
    parser.add_argument("--version", action="version", version=f"ddkit {__version__}")
    parser.add_argument("--log-level", default=None, help="log level (default DDKIT_LOG_LEVEL or INFO)")
    subparsers = parser.add_subparsers(dest="command", required=True)

    # Include the command modules
    seq.register(subparsers)
    lambdas.register(subparsers)
    filters.register(subparsers)
    run.register(subparsers)
    fit.register(subparsers)
    history.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments and dispatch to the selected command

    Exit codes: 0 success or passing fit, 1 numeric failure or failing fit, 2 usage error.
    argparse itself exits with 2 on malformed command lines.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    try:
        return args.handler(args)
    except CommandError as e:
        logger.error(e.detail)
        print(f"ddkit {args.command}: {e.detail}", file=sys.stderr)
        return e.exit_code


# Entry point for running the program
if __name__ == "__main__":
    sys.exit(main())
