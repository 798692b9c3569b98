import os

# keep test runs from writing logs/csifb.log into the checkout
os.environ.setdefault("CSIFB_LOG_FILE", "0")

import numpy as np  # noqa: E402
import pytest  # noqa: E402

from csifb.channel.arrays import (  # noqa: E402
    AntennaArray,
    build_correlation,
)
from csifb.channel.fading import ChannelGenerator, DelayProfile  # noqa: E402
from csifb.covariance.model import (  # noqa: E402
    analytic_covariance,
    frequency_correlation,
)


def make_model(n_f, taps, tx, rx, decay=2.0):
    """Unit-power model; tx and rx are (n_h, n_v, rho) triples."""
    profile = DelayProfile.exponential(taps, decay)
    r_t = build_correlation(AntennaArray(*tx))
    r_r = build_correlation(AntennaArray(*rx))
    model = analytic_covariance(
        frequency_correlation(profile, 1.0, n_f), r_t, r_r
    )
    return model, ChannelGenerator(r_t, r_r, profile, n_f)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture(scope="session")
def toy():
    """N_f = 6, L = 3, 4x1 tx, 2x1 rx: N = 48, rank 24."""
    return make_model(6, 3, (4, 1, 0.8), (2, 1, 0.5))


@pytest.fixture(scope="session")
def small():
    """N_f = 8, L = 3, 2x2 tx, 2x1 rx: N = 64, rank 24."""
    return make_model(8, 3, (2, 2, 0.8), (2, 1, 0.5))


@pytest.fixture(scope="session")
def desk():
    """Default experiment dimensions: N = 512, rank 96."""
    return make_model(16, 3, (4, 4, 0.8), (2, 1, 0.5))


@pytest.fixture
def tiny_document():
    return {
        "tx_array": {"n_h": 2, "n_v": 2, "rho": 0.8},
        "rx_array": {"n_h": 1, "n_v": 1, "rho": 0.5},
        "n_f": 4,
        "delay_profile": {"kind": "exponential", "taps": 2, "decay": 2.0},
        "link": {"users": 2},
        "schemes": ["SCF-f", "TCF-v1", "FCF-f2"],
        "gamma_fb": [2, 4],
        "q": 8,
        "drops": 3,
        "symbols_per_drop": 4,
        "seed": 7,
        "sweep": {
            "arrays": [1, 2],
            "byte_budgets": [None, 2],
            "scheme": "SCF-f",
        },
    }
