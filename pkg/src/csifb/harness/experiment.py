"""
experiment.py

Experiment document (JSON) parsing, validation and object builders.

Every key is optional; missing keys take the desk-scale defaults below.
Unknown keys anywhere in the document are rejected. Validators return
(is_valid, error_message) and the loader turns a failure into
ConfigError. See docs/CONFIG.md for the field reference with units.
"""

import copy
import json
from dataclasses import dataclass, replace
from pathlib import Path

from csifb.channel.arrays import AntennaArray, build_correlation
from csifb.channel.fading import ChannelGenerator, DelayProfile
from csifb.codec.registry import SCHEMES
from csifb.config import settings
from csifb.covariance.model import (
    CovarianceModel,
    analytic_covariance,
    frequency_correlation,
)
from csifb.errors import ConfigError
from csifb.linksim.config import LinkConfig
from csifb.utils.logger import logger

DEFAULTS: dict = {
    "tx_array": {"n_h": 4, "n_v": 4, "rho": 0.8},
    "rx_array": {"n_h": 2, "n_v": 1, "rho": 0.5},
    "n_f": 16,
    "delay_profile": {"kind": "exponential", "taps": 3, "decay": 2.0},
    "link": {
        "bandwidth_hz": 10e6,
        "tx_power_dbm": 43.0,
        "noise_psd_dbm_hz": -174.0,
        "coverage_km": 1.0,
        "pathloss_intercept_db": -123.0,
        "pathloss_exponent": 3.76,
        "users": 4,
        "modulation": "16qam",
        "min_distance_km": None,
    },
    "schemes": ["SCF-f", "TCF-v1", "TCF-f2", "FCF-f2"],
    "gamma_fb": [2, 4, 8, 16],
    "m": None,
    "q": 12,
    "drops": 100,
    "symbols_per_drop": 16,
    "seed": 1,
    "threads": settings.THREADS,
    "output": "results/metrics.csv",
    "covariance_file": None,
    "analyze": {"m": None, "sigma2": 1.0},
    "sweep": {
        "arrays": [2, 3, 4],
        "byte_budgets": [None, 4, 8, 16],
        "scheme": "SCF-f",
    },
}

PROFILE_KINDS = ("exponential", "uniform", "powers")
PROFILE_KEYS = {"kind", "taps", "decay", "powers"}
# replaced as a whole instead of merged key by key
_LEAF_SECTIONS = {"delay_profile"}


@dataclass(frozen=True)
class AnalyzeSpec:
    m: tuple[int, ...] | None
    sigma2: float


@dataclass(frozen=True)
class SweepSpec:
    arrays: tuple[int, ...]
    byte_budgets: tuple[float | None, ...]
    scheme: str


@dataclass(frozen=True)
class ExperimentConfig:
    tx_array: AntennaArray
    rx_array: AntennaArray
    n_f: int
    profile: DelayProfile
    profile_spec: dict
    link: LinkConfig
    schemes: tuple[str, ...]
    gamma_fb: tuple[float, ...] | None
    m: tuple[int, ...] | None
    q: int
    drops: int
    symbols_per_drop: int
    seed: int
    threads: int
    output: str
    covariance_file: str | None
    analyze: AnalyzeSpec
    sweep: SweepSpec

    @property
    def n_s(self) -> int:
        return self.tx_array.n * self.rx_array.n

    @property
    def n(self) -> int:
        return self.n_f * self.n_s

    @property
    def streams(self) -> int:
        return self.link.users * self.rx_array.n

    def with_tx_array(self, tx_array: AntennaArray) -> "ExperimentConfig":
        return replace(self, tx_array=tx_array)


def _merge(defaults: dict, raw: dict, where: str) -> dict:
    unknown = sorted(set(raw) - set(defaults))
    if unknown:
        raise ConfigError(f"{where}: unknown field(s) {', '.join(unknown)}")
    merged = copy.deepcopy(defaults)
    for key, value in raw.items():
        if key in _LEAF_SECTIONS:
            if not isinstance(value, dict):
                raise ConfigError(f"{where}.{key} must be an object")
            merged[key] = copy.deepcopy(value)
        elif isinstance(defaults[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(f"{where}.{key} must be an object")
            merged[key] = _merge(defaults[key], value, f"{where}.{key}")
        else:
            merged[key] = value
    return merged


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def validate_count(value, name: str, minimum: int = 1) -> tuple[bool, str]:
    if not _is_int(value):
        return False, f"{name} must be an integer"
    if value < minimum:
        return False, f"{name} must be >= {minimum}, got {value}"
    return True, ""


def validate_array(raw: dict, name: str) -> tuple[bool, str]:
    for key in ("n_h", "n_v"):
        ok, message = validate_count(raw.get(key), f"{name}.{key}")
        if not ok:
            return False, message
    rho = raw.get("rho")
    if not _is_number(rho) or not 0.0 <= rho <= 1.0:
        return False, f"{name}.rho must be a number in [0, 1]"
    return True, ""


def validate_profile(raw: dict, n_f: int) -> tuple[bool, str]:
    unknown = set(raw) - PROFILE_KEYS
    if unknown:
        return False, f"delay_profile: unknown field(s) {sorted(unknown)}"
    kind = raw.get("kind")
    if kind not in PROFILE_KINDS:
        return False, f"delay_profile.kind must be one of {PROFILE_KINDS}"
    if kind == "powers":
        powers = raw.get("powers")
        if not isinstance(powers, list) or not powers:
            return False, "delay_profile.powers must be a non-empty list"
        if not all(_is_number(p) and p >= 0 for p in powers):
            return False, "delay_profile.powers must be numbers >= 0"
        if sum(powers) <= 0:
            return False, "delay_profile.powers must not all be zero"
        taps = len(powers)
    else:
        ok, message = validate_count(raw.get("taps"), "delay_profile.taps")
        if not ok:
            return False, message
        taps = raw["taps"]
        if kind == "exponential":
            decay = raw.get("decay", 2.0)
            if not _is_number(decay) or decay <= 0:
                return False, "delay_profile.decay must be positive"
    if taps > n_f:
        return False, f"delay profile has {taps} taps but n_f = {n_f}"
    return True, ""


def validate_budgets(doc: dict) -> tuple[bool, str]:
    grid_fb, grid_m = doc["gamma_fb"], doc["m"]
    if grid_fb is not None and grid_m is not None:
        return False, "give either gamma_fb or m, not both"
    if grid_fb is None and grid_m is None:
        return False, "one of gamma_fb or m is required"
    if grid_fb is not None:
        if not isinstance(grid_fb, list) or not grid_fb:
            return False, "gamma_fb must be a non-empty list"
        if not all(_is_number(g) and g >= 1 for g in grid_fb):
            return False, "gamma_fb values must be numbers >= 1"
    if grid_m is not None:
        if not isinstance(grid_m, list) or not grid_m:
            return False, "m must be a non-empty list"
        if not all(_is_int(m) and m >= 1 for m in grid_m):
            return False, "m values must be integers >= 1"
    return True, ""


def _check(result: tuple[bool, str]):
    ok, message = result
    if not ok:
        raise ConfigError(message)


def _profile(raw: dict) -> DelayProfile:
    if raw["kind"] == "exponential":
        return DelayProfile.exponential(raw["taps"], raw.get("decay", 2.0))
    if raw["kind"] == "uniform":
        return DelayProfile.uniform(raw["taps"])
    return DelayProfile.from_powers(raw["powers"])


def _link(raw: dict) -> LinkConfig:
    values = {key: value for key, value in raw.items() if value is not None}
    for key, value in values.items():
        if key == "modulation":
            continue
        if key == "users":
            _check(validate_count(value, "link.users"))
        elif not _is_number(value):
            raise ConfigError(f"link.{key} must be a number")
    try:
        return LinkConfig(**values)
    except ValueError as exc:
        raise ConfigError(f"link: {exc}") from exc


def parse_config(raw: dict) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError("experiment document must be a JSON object")
    doc = _merge(DEFAULTS, raw, "config")
    # an explicit m grid replaces the default gamma_fb grid
    if "m" in raw and "gamma_fb" not in raw:
        doc["gamma_fb"] = None

    _check(validate_array(doc["tx_array"], "tx_array"))
    _check(validate_array(doc["rx_array"], "rx_array"))
    _check(validate_count(doc["n_f"], "n_f"))
    _check(validate_profile(doc["delay_profile"], doc["n_f"]))
    _check(validate_budgets(doc))
    for key in ("drops", "symbols_per_drop", "threads"):
        _check(validate_count(doc[key], key))
    _check(validate_count(doc["seed"], "seed", minimum=0))
    # Q also drives the bit accounting, so it cannot be switched off
    _check(validate_count(doc["q"], "q"))
    if doc["q"] > 32:
        raise ConfigError("q must be <= 32")

    schemes = doc["schemes"]
    if not isinstance(schemes, list) or not schemes:
        raise ConfigError("schemes must be a non-empty list")
    unknown = [s for s in schemes if s not in SCHEMES]
    if unknown:
        raise ConfigError(
            f"unknown scheme(s) {unknown}, expected {list(SCHEMES)}"
        )

    analyze = doc["analyze"]
    if analyze["m"] is not None and not all(
        _is_int(m) and m >= 0 for m in analyze["m"]
    ):
        raise ConfigError("analyze.m values must be integers >= 0")
    if not _is_number(analyze["sigma2"]) or analyze["sigma2"] <= 0:
        raise ConfigError("analyze.sigma2 must be positive")

    sweep = doc["sweep"]
    if not sweep["arrays"] or not all(
        _is_int(a) and a >= 1 for a in sweep["arrays"]
    ):
        raise ConfigError("sweep.arrays must be integers >= 1")
    if not sweep["byte_budgets"] or not all(
        b is None or (_is_number(b) and b > 0) for b in sweep["byte_budgets"]
    ):
        raise ConfigError("sweep.byte_budgets must be positive or null")
    if sweep["scheme"] not in SCHEMES:
        raise ConfigError(f"unknown sweep.scheme '{sweep['scheme']}'")

    tx, rx = doc["tx_array"], doc["rx_array"]
    return ExperimentConfig(
        tx_array=AntennaArray(tx["n_h"], tx["n_v"], float(tx["rho"])),
        rx_array=AntennaArray(rx["n_h"], rx["n_v"], float(rx["rho"])),
        n_f=doc["n_f"],
        profile=_profile(doc["delay_profile"]),
        profile_spec=doc["delay_profile"],
        link=_link(doc["link"]),
        schemes=tuple(schemes),
        gamma_fb=(
            tuple(float(g) for g in doc["gamma_fb"])
            if doc["gamma_fb"] is not None
            else None
        ),
        m=tuple(doc["m"]) if doc["m"] is not None else None,
        q=doc["q"],
        drops=doc["drops"],
        symbols_per_drop=doc["symbols_per_drop"],
        seed=doc["seed"],
        threads=doc["threads"],
        output=str(doc["output"]),
        covariance_file=doc["covariance_file"],
        analyze=AnalyzeSpec(
            m=tuple(analyze["m"]) if analyze["m"] is not None else None,
            sigma2=float(analyze["sigma2"]),
        ),
        sweep=SweepSpec(
            arrays=tuple(sweep["arrays"]),
            byte_budgets=tuple(sweep["byte_budgets"]),
            scheme=sweep["scheme"],
        ),
    )


def load_config(path: str | Path | None = None) -> ExperimentConfig:
    """Read and validate an experiment document; None gives the defaults."""
    if path is None:
        logger.info("No config given, using desk-scale defaults")
        return parse_config({})
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    config = parse_config(raw)
    logger.info(f"Config loaded from {path}")
    return config


def build_model(
    config: ExperimentConfig, tx_array: AntennaArray | None = None
) -> CovarianceModel:
    """Unit-power analytic covariance of the configured channel."""
    tx_array = tx_array or config.tx_array
    return analytic_covariance(
        frequency_correlation(config.profile, 1.0, config.n_f),
        build_correlation(tx_array),
        build_correlation(config.rx_array),
    )


def build_generator(
    config: ExperimentConfig, tx_array: AntennaArray | None = None
) -> ChannelGenerator:
    tx_array = tx_array or config.tx_array
    return ChannelGenerator(
        build_correlation(tx_array),
        build_correlation(config.rx_array),
        config.profile,
        config.n_f,
    )
