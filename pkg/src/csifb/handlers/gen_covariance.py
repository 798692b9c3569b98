import argparse

from csifb.handlers.common import Router, add_common_flags, resolve_config
from csifb.harness.commands import gen_covariance
from csifb.utils.logger import logger

DEFAULT_OUT = "results/covariance.json"


def configure(parser: argparse.ArgumentParser) -> None:
    add_common_flags(
        parser, out_help=f"covariance file to write (default {DEFAULT_OUT})"
    )


def handle(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    out = args.out or DEFAULT_OUT
    logger.info(f"gen-covariance: N={config.n}, writing {out}")
    summary = gen_covariance(config, out)
    for line in summary.lines():
        print(line)
    return 0


router = Router(
    name="gen-covariance",
    help="build the analytic covariance model and save its factors",
    configure=configure,
    handle=handle,
)
