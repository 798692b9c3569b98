"""Pieces shared by the subcommand handlers."""

import argparse
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable

from csifb.errors import ConfigError
from csifb.harness.experiment import ExperimentConfig, load_config
from csifb.storage.tables import render_table, write_table

STDOUT = "-"


@dataclass(frozen=True)
class Router:
    """One CLI subcommand: its parser setup and its handler."""

    name: str
    help: str
    configure: Callable[[argparse.ArgumentParser], None]
    handle: Callable[[argparse.Namespace], int]

    def attach(self, subparsers) -> argparse.ArgumentParser:
        parser = subparsers.add_parser(
            self.name, help=self.help, description=self.help
        )
        self.configure(parser)
        parser.set_defaults(handler=self.handle)
        return parser


def _seed(raw: str) -> int:
    try:
        value = int(raw, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed '{raw}'") from None
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def _positive(raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid count '{raw}'") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def add_common_flags(parser: argparse.ArgumentParser, out_help: str):
    parser.add_argument(
        "--config", help="JSON experiment document (defaults if omitted)"
    )
    parser.add_argument(
        "--seed", type=_seed, help="master seed, overrides the document"
    )
    parser.add_argument("--out", help=out_help)
    parser.add_argument(
        "--threads",
        type=_positive,
        help="worker threads for the drop loop, overrides the document",
    )


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    """Load the document and apply the CLI overrides."""
    config = load_config(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.threads is not None:
        overrides["threads"] = args.threads
    return replace(config, **overrides) if overrides else config


def emit_table(out: str | None, kind: str, record_type, records) -> None:
    """Write a CSV table to `out`, or to stdout when it is None or '-'."""
    if out is None or out == STDOUT:
        sys.stdout.write(render_table(kind, record_type, records))
        return
    write_table(Path(out), kind, record_type, records)


def parse_int_list(raw: str, name: str) -> list[int]:
    try:
        return [int(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(
            f"{name} must be a comma-separated list of integers"
        ) from None
