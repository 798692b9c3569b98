import argparse

from csifb.handlers.common import (
    Router,
    add_common_flags,
    emit_table,
    resolve_config,
)
from csifb.harness.records import SweepRecord
from csifb.harness.sweep import best_per_budget, sweep_antennas
from csifb.utils.logger import logger


def configure(parser: argparse.ArgumentParser) -> None:
    add_common_flags(parser, out_help="CSV to write (default stdout)")


def handle(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    records = sweep_antennas(config)
    for budget, n_t in best_per_budget(records).items():
        label = "unlimited" if budget is None else f"{budget:g} B"
        logger.info(f"sweep-antennas: best N_t for {label} is {n_t}")
    emit_table(args.out, "sweep", SweepRecord, records)
    return 0


router = Router(
    name="sweep-antennas",
    help="SE per square transmit array under feedback byte budgets",
    configure=configure,
    handle=handle,
)
