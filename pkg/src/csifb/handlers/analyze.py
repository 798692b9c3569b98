import argparse

from csifb.errors import ConfigError
from csifb.handlers.common import (
    Router,
    add_common_flags,
    emit_table,
    parse_int_list,
    resolve_config,
)
from csifb.harness.commands import analyze, resolve_model
from csifb.harness.records import AnalyzeRecord
from csifb.storage.covariance_file import load_model


def configure(parser: argparse.ArgumentParser) -> None:
    add_common_flags(parser, out_help="CSV to write (default stdout)")
    parser.add_argument(
        "--covariance",
        help="covariance file from gen-covariance (default: the "
        "document's covariance_file, else the analytic model)",
    )
    parser.add_argument("--m", help="comma-separated m grid")
    parser.add_argument(
        "--sigma2", type=float, help="noise variance for the BER bound"
    )


def handle(args: argparse.Namespace) -> int:
    config = resolve_config(args)
    if args.covariance is not None:
        model = load_model(args.covariance)
    else:
        model = resolve_model(config)
    ms = config.analyze.m
    if args.m is not None:
        ms = parse_int_list(args.m, "--m")
    sigma2 = config.analyze.sigma2
    if args.sigma2 is not None:
        if args.sigma2 <= 0:
            raise ConfigError("--sigma2 must be positive")
        sigma2 = args.sigma2
    records = analyze(model, ms, sigma2)
    emit_table(args.out, "analyze", AnalyzeRecord, records)
    return 0


router = Router(
    name="analyze",
    help="analytic NMSE and BER-bound curves, no Monte Carlo",
    configure=configure,
    handle=handle,
)
