import argparse

from csifb.handlers.common import (
    Router,
    add_common_flags,
    emit_table,
    resolve_config,
)
from csifb.harness.commands import simulate
from csifb.harness.records import MetricsRecord
from csifb.utils.logger import logger


def configure(parser: argparse.ArgumentParser) -> None:
    add_common_flags(
        parser,
        out_help="CSV to write, '-' for stdout (default: the document's "
        "output path)",
    )


def handle(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    records = simulate(config)
    failed = [r for r in records if r.error is not None]
    if failed:
        logger.warning(f"simulate: {len(failed)} row(s) recorded an error")
    emit_table(args.out or config.output, "metrics", MetricsRecord, records)
    return 0


router = Router(
    name="simulate",
    help="Monte-Carlo NMSE, BER and SE for every scheme and budget",
    configure=configure,
    handle=handle,
)
