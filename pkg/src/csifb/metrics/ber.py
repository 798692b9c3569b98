"""Gray-mapped 16-QAM error probability and its Jensen lower bound.

With symbol SNR mu the exact AWGN bit error rate is

    f(mu) = 3/4 Q(x) + 1/2 Q(3x) - 1/4 Q(5x),   x = sqrt(mu / 5)

which is the `exact` form. `printed` evaluates the often-quoted variant
3/4 Q(sqrt(mu/5)) + 1/2 Q(sqrt(3 mu/5)) - 1/4 Q(sqrt(mu)); both equal
1/2 at mu = 0 and decay to zero.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from csifb.errors import DimensionError
from csifb.metrics.nmse import eigenvalue_spectrum, nmse_analytic

FORMS = ("exact", "printed")


@dataclass(frozen=True)
class BerReport:
    mu_mean: float
    ber_bound: float
    ber_empirical: float
    standard_error: float
    trials: int


def qfunc(x):
    """Standard normal tail probability Q(x) = erfc(x / sqrt(2)) / 2."""
    result = 0.5 * erfc(np.asarray(x, dtype=float) / np.sqrt(2.0))
    return float(result) if np.ndim(result) == 0 else result


def ber_16qam(mu, form: str = "exact"):
    mu_arr = np.asarray(mu, dtype=float)
    if np.any(mu_arr < 0) or not np.all(np.isfinite(mu_arr)):
        raise DimensionError("mu must be finite and >= 0")
    if form == "exact":
        x = np.sqrt(mu_arr / 5.0)
        result = (
            0.75 * qfunc(x) + 0.5 * qfunc(3.0 * x) - 0.25 * qfunc(5.0 * x)
        )
    elif form == "printed":
        result = (
            0.75 * qfunc(np.sqrt(mu_arr / 5.0))
            + 0.5 * qfunc(np.sqrt(3.0 * mu_arr / 5.0))
            - 0.25 * qfunc(np.sqrt(mu_arr))
        )
    else:
        raise DimensionError(f"unknown BER form '{form}', use {FORMS}")
    return float(result) if np.ndim(result) == 0 else np.asarray(result)


def mean_effective_snr(source, m: int, sigma2: float) -> float:
    """E[mu] = tr(D) (1 - delta(m)) / sigma2."""
    if sigma2 <= 0:
        raise DimensionError(f"sigma2 must be positive, got {sigma2}")
    trace = float(eigenvalue_spectrum(source).sum())
    return trace * (1.0 - nmse_analytic(source, m)) / sigma2


def ber_lower_bound(
    source, m: int, sigma2: float, form: str = "exact"
) -> float:
    """f(E[mu]) <= E[f(mu)] by convexity of f."""
    return ber_16qam(mean_effective_snr(source, m, sigma2), form=form)
