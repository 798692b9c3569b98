"""JSON covariance files shared by the feedback transmitter and receiver.

Only the factors are stored (first column of C_f, full R_t and R_r) plus
the tolerances, so both ends rebuild the identical KLT basis.
"""

import json
from pathlib import Path

import numpy as np

from csifb.channel.arrays import CorrelationMatrix
from csifb.config import settings
from csifb.covariance.model import CovarianceModel, FrequencyCovariance
from csifb.errors import ConfigError
from csifb.utils.logger import logger

FORMAT = "csifb-covariance"
VERSION = 1


def model_to_dict(model: CovarianceModel, meta: dict | None = None) -> dict:
    return {
        "format": FORMAT,
        "version": VERSION,
        "n_f": model.n_f,
        "n_t": model.n_t,
        "n_r": model.n_r,
        "c_f": {
            "real": [float(v) for v in model.c_f.c.real],
            "imag": [float(v) for v in model.c_f.c.imag],
        },
        "r_t": model.r_t.entries.tolist(),
        "r_r": model.r_r.entries.tolist(),
        "rank_tol": model.rank_tol,
        "psd_tol": settings.PSD_TOL,
        "meta": meta or {},
    }


def model_from_dict(raw: dict) -> CovarianceModel:
    if raw.get("format") != FORMAT:
        raise ConfigError(f"not a {FORMAT} document")
    if raw.get("version") != VERSION:
        raise ConfigError(
            f"unsupported covariance file version {raw.get('version')}"
        )
    try:
        c = np.asarray(raw["c_f"]["real"]) + 1j * np.asarray(
            raw["c_f"]["imag"]
        )
        model = CovarianceModel(
            FrequencyCovariance(c),
            CorrelationMatrix(np.asarray(raw["r_t"], dtype=float)),
            CorrelationMatrix(np.asarray(raw["r_r"], dtype=float)),
            rank_tol=float(raw["rank_tol"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed covariance file: {exc}") from exc
    expected = (raw.get("n_f"), raw.get("n_t"), raw.get("n_r"))
    if expected != model.shape:
        raise ConfigError(
            f"covariance file dimensions {expected} do not match its "
            f"factors {model.shape}"
        )
    return model


def save_model(
    model: CovarianceModel, path, meta: dict | None = None
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(model_to_dict(model, meta), indent=2, sort_keys=True)
    path.write_text(text + "\n", encoding="utf-8")
    logger.info(f"Covariance model (N={model.n}) saved to {path}")
    return path


def load_model(path) -> CovarianceModel:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"covariance file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
    model = model_from_dict(raw)
    logger.info(f"Covariance model (N={model.n}) loaded from {path}")
    return model
