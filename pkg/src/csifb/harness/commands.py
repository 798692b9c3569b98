"""Work behind the CLI subcommands, independent of argument parsing."""

from dataclasses import dataclass

from csifb.codec.bits import FeedbackBudget, budget_for_target, feedback_bits
from csifb.codec.registry import SCF, get_scheme
from csifb.codec.schemes import FeedbackCodec
from csifb.codec.selection import FCF_EQUIDISTANT, FULL, PCA_FIXED
from csifb.covariance.klt import KltOperator
from csifb.covariance.model import CovarianceModel, distortion_free_ratio
from csifb.errors import ConfigError, CsifbError
from csifb.harness.experiment import (
    ExperimentConfig,
    build_generator,
    build_model,
)
from csifb.harness.records import AnalyzeRecord, MetricsRecord
from csifb.linksim.runner import LinkContext, RowSpec, run_drops
from csifb.metrics.ber import ber_lower_bound
from csifb.metrics.nmse import nmse_analytic, nmse_curve
from csifb.storage.covariance_file import load_model, save_model
from csifb.utils.logger import logger

TOP_EIGENVALUES = 8


@dataclass(frozen=True)
class CovarianceSummary:
    n: int
    ranks: tuple[int, int, int]
    rank: int
    gamma_star: float
    gamma_f: float
    gamma_t: float
    gamma_r: float
    top_eigenvalues: tuple[float, ...]

    def lines(self) -> list[str]:
        rank_f, rank_t, rank_r = self.ranks
        top = ", ".join(format(v, ".6g") for v in self.top_eigenvalues)
        return [
            f"N = {self.n}",
            f"rank(C_h) = {self.rank} = {rank_f} x {rank_t} x {rank_r} "
            f"(C_f x R_t x R_r)",
            f"gamma* = {self.gamma_star:.6g} "
            f"(gamma_f = {self.gamma_f:.6g}, gamma_t = {self.gamma_t:.6g}, "
            f"gamma_r = {self.gamma_r:.6g})",
            f"top eigenvalues: {top}",
        ]


def summarize_model(model: CovarianceModel) -> CovarianceSummary:
    ratio = distortion_free_ratio(model)
    return CovarianceSummary(
        n=model.n,
        ranks=model.factor_ranks(),
        rank=model.rank(),
        gamma_star=ratio.gamma_star,
        gamma_f=ratio.gamma_f,
        gamma_t=ratio.gamma_t,
        gamma_r=ratio.gamma_r,
        top_eigenvalues=tuple(
            float(v) for v in model.eigenvalues[:TOP_EIGENVALUES]
        ),
    )


def gen_covariance(config: ExperimentConfig, out) -> CovarianceSummary:
    model = build_model(config)
    meta = {
        "tx_array": vars_of(config.tx_array),
        "rx_array": vars_of(config.rx_array),
        "n_f": config.n_f,
        "delay_profile": config.profile_spec,
    }
    save_model(model, out, meta=meta)
    return summarize_model(model)


def vars_of(array) -> dict:
    return {"n_h": array.n_h, "n_v": array.n_v, "rho": array.rho}


def resolve_model(config: ExperimentConfig) -> CovarianceModel:
    """The configured covariance file if any, else the analytic model."""
    if config.covariance_file is None:
        return build_model(config)
    model = load_model(config.covariance_file)
    expected = (config.n_f, config.tx_array.n, config.rx_array.n)
    if model.shape != expected:
        raise ConfigError(
            f"covariance file {config.covariance_file} has shape "
            f"{model.shape}, config needs {expected}"
        )
    return model


def build_codecs(
    config: ExperimentConfig, model: CovarianceModel, schemes
) -> dict[str, FeedbackCodec]:
    klt = None
    if any(get_scheme(name).family == SCF for name in schemes):
        klt = KltOperator(model)
    codecs = {}
    for name in schemes:
        spec = get_scheme(name)
        codecs[name] = FeedbackCodec(
            spec, config.n_f, config.n_s, klt if spec.needs_model else None
        )
    return codecs


def _budgets(
    config: ExperimentConfig, scheme: str
) -> list[tuple[FeedbackBudget | None, str | None]]:
    """(budget, error) per grid point for one scheme."""
    spec = get_scheme(scheme)
    n, q = config.n, config.q
    if spec.policy == FULL:
        return [(feedback_bits(spec, n, q, n), None)]
    result = []
    if config.gamma_fb is not None:
        for target in config.gamma_fb:
            try:
                result.append(
                    (budget_for_target(spec, target, n, q, config.n_s), None)
                )
            except CsifbError as exc:
                result.append((None, f"gamma_fb={target:g}: {exc}"))
        return result
    for m in config.m:
        if m > n:
            result.append((None, f"m={m} exceeds N={n}"))
        elif spec.policy == FCF_EQUIDISTANT and m % config.n_s:
            result.append(
                (None, f"m={m} is not a multiple of N_r*N_t={config.n_s}")
            )
        else:
            result.append((feedback_bits(spec, m, q, n), None))
    return result


def _error_record(scheme: str, config: ExperimentConfig, error: str):
    return MetricsRecord(
        scheme=scheme,
        m=None,
        total_bits=None,
        gamma=None,
        gamma_fb=None,
        nmse_analytic=None,
        nmse_empirical=None,
        nmse_unquantized=None,
        ber_empirical=None,
        ber_bound=None,
        se=None,
        se_degradation_pct=None,
        feedback_reduction_pct=None,
        drops=0,
        seed=config.seed,
        error=error,
    )


def simulate(config: ExperimentConfig) -> list[MetricsRecord]:
    """One record per (scheme, budget), plus the FULL baseline if asked."""
    model = resolve_model(config)
    schemes = list(dict.fromkeys(["FULL", *config.schemes]))
    codecs = build_codecs(config, model, schemes)

    rows: list[RowSpec] = []
    row_index: dict[RowSpec, int] = {}
    plan = []
    for scheme in schemes:
        for budget, error in _budgets(config, scheme):
            if budget is None:
                plan.append((scheme, None, error))
                continue
            row = RowSpec(scheme, budget.m)
            if row not in row_index:
                row_index[row] = len(rows)
                rows.append(row)
            plan.append((scheme, budget, None))

    context = LinkContext(
        generator=build_generator(config),
        link=config.link,
        codecs=codecs,
        q=config.q,
        symbols_per_drop=config.symbols_per_drop,
        seed=config.seed,
        rows=rows,
    )
    logger.info(
        f"Simulating {len(rows)} row(s) over {config.drops} drop(s), "
        f"N={config.n}, seed={config.seed}"
    )
    tallies = run_drops(context, config.drops, config.threads)
    baseline = tallies[row_index[RowSpec("FULL", config.n)]]

    records = []
    for scheme, budget, error in plan:
        if scheme == "FULL" and "FULL" not in config.schemes:
            continue
        if budget is None:
            records.append(_error_record(scheme, config, error))
            continue
        tally = tallies[row_index[RowSpec(scheme, budget.m)]]
        spec = get_scheme(scheme)
        analytic = bound = None
        if spec.family == SCF and spec.policy == PCA_FIXED:
            analytic = nmse_analytic(model, budget.m)
            bound = ber_lower_bound(model, budget.m, config.analyze.sigma2)
        degradation = None
        if baseline.error is None and tally.error is None and baseline.se:
            degradation = (baseline.se - tally.se) / baseline.se * 100.0
        records.append(
            MetricsRecord(
                scheme=scheme,
                m=budget.m,
                total_bits=budget.total_bits,
                gamma=budget.gamma,
                gamma_fb=budget.gamma_fb,
                nmse_analytic=analytic,
                nmse_empirical=tally.nmse_quantized,
                nmse_unquantized=tally.nmse_unquantized,
                ber_empirical=tally.ber,
                ber_bound=bound,
                se=tally.se,
                se_degradation_pct=degradation,
                feedback_reduction_pct=budget.feedback_reduction_pct,
                drops=tally.drops,
                seed=config.seed,
                error=tally.error,
            )
        )
    return records


def default_analyze_grid(model: CovarianceModel) -> list[int]:
    n = model.n
    grid = {0, n // 16, n // 8, n // 4, n // 2, model.rank(), n}
    return sorted(m for m in grid if 0 <= m <= n)


def analyze(
    model: CovarianceModel, ms=None, sigma2: float = 1.0
) -> list[AnalyzeRecord]:
    """Analytic NMSE and BER bound curves, no Monte Carlo."""
    ms = default_analyze_grid(model) if ms is None else sorted(set(ms))
    too_large = [m for m in ms if m > model.n]
    if too_large:
        raise ConfigError(f"analyze: m={too_large[0]} exceeds N={model.n}")
    deltas = nmse_curve(model, ms)
    return [
        AnalyzeRecord(
            m=int(m),
            gamma=model.n / m if m else None,
            delta=float(delta),
            ber_bound=ber_lower_bound(model, m, sigma2),
        )
        for m, delta in zip(ms, deltas)
    ]
