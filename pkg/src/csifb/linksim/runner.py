"""Drop-level Monte Carlo over feedback schemes and budgets.

A drop places the users, draws one channel per user and then, for every
row (scheme, m), compresses, recovers, precodes and measures. Drops are
independent and seeded from (master seed, drop, stream), so they can be
run on a thread pool; results are reduced in drop order, which keeps
sums and therefore output bytes identical for any worker count.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from csifb.channel.fading import ChannelGenerator, unstack_subcarriers
from csifb.codec.schemes import FeedbackCodec
from csifb.errors import CsifbError
from csifb.linksim.config import LinkConfig
from csifb.linksim.drop import drop_users
from csifb.linksim.modem import BitTally, transmit_16qam
from csifb.linksim.precoding import (
    aggregate_channels,
    measure_sinr,
    zf_precoder,
)
from csifb.metrics.se import spectral_efficiency
from csifb.utils.helpers import make_rng
from csifb.utils.logger import logger

# seed streams: 0 drop geometry, 1..K user channels, then modem streams
_DROP_STREAM = 0
_MODEM_STREAM_BASE = 1 << 20


@dataclass(frozen=True)
class RowSpec:
    scheme: str
    m: int


@dataclass
class RowTally:
    """Running sums for one (scheme, m) row."""

    err_quantized: float = 0.0
    err_unquantized: float = 0.0
    power: float = 0.0
    bit_errors: int = 0
    bits: int = 0
    se_sum: float = 0.0
    drops: int = 0
    error: str | None = None

    def add(self, other: "RowTally") -> None:
        self.err_quantized += other.err_quantized
        self.err_unquantized += other.err_unquantized
        self.power += other.power
        self.bit_errors += other.bit_errors
        self.bits += other.bits
        self.se_sum += other.se_sum
        self.drops += other.drops
        if self.error is None:
            self.error = other.error

    @property
    def nmse_quantized(self) -> float:
        return self.err_quantized / self.power if self.power else float("nan")

    @property
    def nmse_unquantized(self) -> float:
        if not self.power:
            return float("nan")
        return self.err_unquantized / self.power

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bits if self.bits else float("nan")

    @property
    def se(self) -> float:
        return self.se_sum / self.drops if self.drops else float("nan")


@dataclass
class LinkContext:
    """Everything a drop needs; shared read-only between workers."""

    generator: ChannelGenerator
    link: LinkConfig
    codecs: dict[str, FeedbackCodec]
    q: int | None
    symbols_per_drop: int
    seed: int
    rows: list[RowSpec] = field(default_factory=list)

    @property
    def n_f(self) -> int:
        return self.generator.n_f


def _run_row(
    context: LinkContext,
    row_index: int,
    row: RowSpec,
    channels: list,
    drop: int,
) -> RowTally:
    generator = context.generator
    codec = context.codecs[row.scheme]
    tally = RowTally(drops=1)
    recovered = []
    for realization in channels:
        h = realization.h
        scale = np.sqrt(realization.sigma_h2)
        fb = codec.compress(h, row.m, context.q)
        h_tilde = codec.recover(fb)
        if context.q is None:
            h_plain = h_tilde
        else:
            h_plain = codec.recover(codec.compress(h, row.m))
        # NMSE on unit-variance channels, large-scale fading divided out
        tally.err_quantized += float(np.sum(np.abs(h - h_tilde) ** 2)) / (
            scale**2
        )
        tally.err_unquantized += float(np.sum(np.abs(h - h_plain) ** 2)) / (
            scale**2
        )
        tally.power += float(np.sum(np.abs(h) ** 2)) / scale**2
        recovered.append(
            unstack_subcarriers(
                h_tilde, generator.n_f, generator.r_r.n, generator.r_t.n
            )
        )

    h_true = aggregate_channels([c.per_subcarrier for c in channels])
    frame = zf_precoder(
        aggregate_channels(recovered),
        context.link.power_per_subcarrier_mw(context.n_f),
    )
    noise = context.link.noise_power_mw(context.n_f)
    tally.se_sum = spectral_efficiency(measure_sinr(h_true, frame, noise))
    modem_rng = make_rng(context.seed, drop, _MODEM_STREAM_BASE + row_index)
    bits: BitTally = transmit_16qam(
        frame, h_true, noise, context.symbols_per_drop, modem_rng
    )
    tally.bit_errors = bits.errors
    tally.bits = bits.bits
    return tally


def run_drop(context: LinkContext, drop: int) -> list[RowTally]:
    """One drop over every row; a failing row is reported, not raised."""
    placement = drop_users(
        context.link, make_rng(context.seed, drop, _DROP_STREAM)
    )
    channels = [
        context.generator.draw(
            make_rng(context.seed, drop, user + 1),
            sigma_h2=float(placement.sigma_h2[user]),
        )
        for user in range(placement.users)
    ]
    tallies = []
    for index, row in enumerate(context.rows):
        try:
            tallies.append(_run_row(context, index, row, channels, drop))
        except CsifbError as exc:
            logger.warning(
                f"Drop {drop}: row {row.scheme} m={row.m} failed: {exc}"
            )
            tallies.append(RowTally(error=str(exc)))
    logger.debug(f"Drop {drop} done ({len(context.rows)} rows)")
    return tallies


def run_drops(
    context: LinkContext, drops: int, threads: int = 1
) -> list[RowTally]:
    """Run `drops` drops and reduce them in drop order."""
    totals = [RowTally() for _ in context.rows]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = pool.map(
                lambda d: run_drop(context, d), range(drops)
            )
            for per_drop in results:
                for total, tally in zip(totals, per_drop):
                    total.add(tally)
    else:
        for drop in range(drops):
            for total, tally in zip(totals, run_drop(context, drop)):
                total.add(tally)
    logger.info(
        f"Finished {drops} drop(s) x {len(context.rows)} row(s) "
        f"on {threads} thread(s)"
    )
    return totals
