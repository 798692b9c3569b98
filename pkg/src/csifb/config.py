"""
config.py

Runtime settings for the csifb simulator.

Numerical tolerances and process-level knobs come from the environment
(optionally a `.env` file at the repository root). Experiment parameters
live in the JSON experiment document, see `csifb.harness.experiment`.
"""

import os
from pathlib import Path

from dotenv import load_dotenv

env_path = Path(__file__).parent.parent.parent / ".env"
load_dotenv(dotenv_path=env_path)


def _parse_bool(raw: str | None, default: bool) -> bool:
    if raw is None:
        return default
    return str(raw).strip().lower() in ("1", "true", "yes", "on")


class Settings:
    LOG_DIR: str = os.getenv("CSIFB_LOG_DIR", "logs")
    LOG_LEVEL: str = os.getenv("CSIFB_LOG_LEVEL", "INFO").upper()
    # Matrices above this dimension are never materialized.
    DENSE_THRESHOLD: int = int(os.getenv("CSIFB_DENSE_THRESHOLD", "4096"))
    RANK_TOL: float = float(os.getenv("CSIFB_RANK_TOL", "1e-9"))
    PSD_TOL: float = float(os.getenv("CSIFB_PSD_TOL", "1e-9"))
    ZF_EPS: float = float(os.getenv("CSIFB_ZF_EPS", "1e-12"))
    THREADS: int = int(os.getenv("CSIFB_THREADS", "1"))
    MIN_DISTANCE_KM: float = float(
        os.getenv("CSIFB_MIN_DISTANCE_KM", "0.035")
    )

    def __init__(self):
        self.LOG_FILE = _parse_bool(os.getenv("CSIFB_LOG_FILE"), True)
        if self.THREADS < 1:
            self.THREADS = 1


settings = Settings()
