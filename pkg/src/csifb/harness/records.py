"""Result rows emitted by the CLI commands.

Column order is part of the CSV schema; changing it means bumping
`SCHEMA_VERSION` in csifb.storage.tables.
"""

from dataclasses import asdict, dataclass, fields


@dataclass(frozen=True)
class MetricsRecord:
    scheme: str
    m: int | None
    total_bits: int | None
    gamma: float | None
    gamma_fb: float | None
    nmse_analytic: float | None
    nmse_empirical: float | None
    nmse_unquantized: float | None
    ber_empirical: float | None
    ber_bound: float | None
    se: float | None
    se_degradation_pct: float | None
    feedback_reduction_pct: float | None
    drops: int
    seed: int
    error: str | None = None


@dataclass(frozen=True)
class AnalyzeRecord:
    m: int
    gamma: float | None
    delta: float
    ber_bound: float


@dataclass(frozen=True)
class SweepRecord:
    byte_budget: float | None
    n_t: int
    array: int
    m: int | None
    total_bits: int | None
    bytes_per_user_subcarrier: float | None
    gamma_fb: float | None
    se: float | None
    best: bool
    error: str | None = None


def columns(record_type) -> list[str]:
    return [f.name for f in fields(record_type)]


def as_row(record) -> dict:
    return asdict(record)
