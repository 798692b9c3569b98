"""
main.py

Command-line entry point: subcommand routing and the global error handler.
"""

import argparse
import sys

from csifb import __version__
from csifb.errors import ConfigError
from csifb.handlers import (
    analyze_router,
    gen_covariance_router,
    simulate_router,
    sweep_router,
)
from csifb.utils.logger import logger

ROUTERS = (
    gen_covariance_router,
    simulate_router,
    analyze_router,
    sweep_router,
)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="csifb",
        description="PCA/KLT compressive CSI feedback simulator",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for router in ROUTERS:
        router.attach(subparsers)
    return parser


def global_error_handler(exc: BaseException) -> int:
    """Report an exception that escaped a handler and pick the exit code."""
    if isinstance(exc, ConfigError):
        logger.debug(f"Config error: {exc}")
        print(f"csifb: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    logger.error(f"Unhandled error: {exc!r}", exc_info=exc)
    print(f"csifb: error: {exc}", file=sys.stderr)
    return EXIT_RUNTIME


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logger.info(f"csifb {__version__}: {args.command}")
    try:
        return args.handler(args)
    except KeyboardInterrupt:
        logger.warning("Interrupted")
        return EXIT_RUNTIME
    except Exception as exc:
        return global_error_handler(exc)


if __name__ == "__main__":
    sys.exit(main())
