"""Transmit-array size sweep under a per-user feedback byte budget.

A byte budget B is in bytes per user per subcarrier, so one user may feed
back at most 8 * B * N_f bits. For every square array a x a the largest
admissible m is simulated and the SE-maximizing N_t is flagged per
budget. A null budget means unlimited feedback (m = N).
"""

import math
from dataclasses import replace

from csifb.channel.arrays import AntennaArray
from csifb.codec.bits import budget_for_bits, feedback_bits
from csifb.codec.registry import get_scheme
from csifb.errors import CsifbError
from csifb.harness.commands import build_codecs
from csifb.harness.experiment import (
    ExperimentConfig,
    build_generator,
    build_model,
)
from csifb.harness.records import SweepRecord
from csifb.linksim.runner import LinkContext, RowSpec, run_drops
from csifb.utils.logger import logger


def bytes_per_user_subcarrier(total_bits: int, n_f: int) -> float:
    return total_bits / (8.0 * n_f)


def _array_rows(config: ExperimentConfig, a: int) -> list[SweepRecord]:
    tx_array = AntennaArray.square(a, config.tx_array.rho)
    n_t = tx_array.n
    sized = config.with_tx_array(tx_array)
    spec = get_scheme(config.sweep.scheme)

    def failed(budget, error: str) -> SweepRecord:
        return SweepRecord(
            byte_budget=budget,
            n_t=n_t,
            array=a,
            m=None,
            total_bits=None,
            bytes_per_user_subcarrier=None,
            gamma_fb=None,
            se=None,
            best=False,
            error=error,
        )

    if sized.streams > n_t:
        error = f"{sized.streams} streams exceed N_t={n_t}"
        logger.warning(f"Sweep a={a}: {error}")
        return [failed(b, error) for b in config.sweep.byte_budgets]

    plan = []
    for budget in config.sweep.byte_budgets:
        try:
            if budget is None:
                fb = feedback_bits(spec, sized.n, sized.q, sized.n)
            else:
                max_bits = math.floor(8 * budget * sized.n_f + 1e-9)
                fb = budget_for_bits(
                    spec, max_bits, sized.n, sized.q, sized.n_s
                )
            plan.append((budget, fb, None))
        except CsifbError as exc:
            plan.append((budget, None, str(exc)))

    rows = list(
        dict.fromkeys(RowSpec(spec.name, fb.m) for _, fb, _ in plan if fb)
    )
    tallies = {}
    if rows:
        model = build_model(sized)
        context = LinkContext(
            generator=build_generator(sized),
            link=sized.link,
            codecs=build_codecs(sized, model, [spec.name]),
            q=sized.q,
            symbols_per_drop=sized.symbols_per_drop,
            seed=sized.seed,
            rows=rows,
        )
        tallies = dict(
            zip(rows, run_drops(context, sized.drops, sized.threads))
        )

    records = []
    for budget, fb, error in plan:
        if fb is None:
            records.append(failed(budget, error))
            continue
        tally = tallies[RowSpec(spec.name, fb.m)]
        records.append(
            SweepRecord(
                byte_budget=budget,
                n_t=n_t,
                array=a,
                m=fb.m,
                total_bits=fb.total_bits,
                bytes_per_user_subcarrier=bytes_per_user_subcarrier(
                    fb.total_bits, sized.n_f
                ),
                gamma_fb=fb.gamma_fb,
                se=tally.se,
                best=False,
                error=tally.error,
            )
        )
    return records


def _mark_best(records: list[SweepRecord]) -> list[SweepRecord]:
    best = {}
    for index, record in enumerate(records):
        if record.se is None or record.error is not None:
            continue
        key = record.byte_budget
        # ties keep the smaller array
        if key not in best or record.se > records[best[key]].se:
            best[key] = index
    chosen = set(best.values())
    return [
        replace(record, best=True) if i in chosen else record
        for i, record in enumerate(records)
    ]


def sweep_antennas(config: ExperimentConfig) -> list[SweepRecord]:
    records = []
    for a in sorted(config.sweep.arrays):
        logger.info(f"Sweep: simulating {a}x{a} transmit array")
        records.extend(_array_rows(config, a))
    return _mark_best(records)


def best_per_budget(records: list[SweepRecord]) -> dict:
    return {r.byte_budget: r.n_t for r in records if r.best}
