from dataclasses import dataclass

import numpy as np

from csifb.errors import DimensionError


@dataclass(frozen=True)
class NmseReport:
    m: int
    delta_analytic: float | None
    delta_empirical: float
    gamma: float
    gamma_fb: float


def nmse_empirical(h_batch: np.ndarray, h_tilde_batch: np.ndarray) -> float:
    """E||h - h~||^2 / E||h||^2 over the batch."""
    h = np.atleast_2d(np.asarray(h_batch))
    h_tilde = np.atleast_2d(np.asarray(h_tilde_batch))
    if h.shape != h_tilde.shape:
        raise DimensionError(
            f"batch shapes differ: {h.shape} vs {h_tilde.shape}"
        )
    if h.size == 0:
        raise DimensionError("empty batch")
    power = float(np.sum(np.abs(h) ** 2))
    if power == 0.0:
        raise DimensionError("NMSE undefined for an all-zero reference")
    return float(np.sum(np.abs(h - h_tilde) ** 2)) / power


def eigenvalue_spectrum(source) -> np.ndarray:
    values = getattr(source, "eigenvalues", source)
    values = np.sort(np.asarray(values, dtype=float).reshape(-1))[::-1]
    return np.clip(values, 0.0, None)


def nmse_analytic(source, m: int) -> float:
    """Uncaptured eigenvalue mass beyond the m principal components.

    `source` is a CovarianceModel, a KLT operator or a plain eigenvalue
    array; values are sorted descending before use.
    """
    values = eigenvalue_spectrum(source)
    if not 0 <= m <= values.size:
        raise DimensionError(f"need 0 <= m <= N = {values.size}, got {m}")
    total = float(values.sum())
    if total <= 0.0:
        raise DimensionError("covariance has zero trace")
    # tail sum, not 1 - head/total, so m >= rank gives exactly 0
    return float(values[m:].sum()) / total


def nmse_curve(source, ms) -> np.ndarray:
    return np.array([nmse_analytic(source, int(m)) for m in ms])


def nmse_report(codec, channels, budget, q=None, source=None) -> NmseReport:
    """Measured NMSE of `codec` at budget.m over a batch of channels.

    `budget` is a FeedbackBudget for the codec's scheme. The analytic value
    is filled in when a covariance `source` is given, which only makes
    sense for the fixed KLT selection.
    """
    channels = np.atleast_2d(np.asarray(channels))
    recovered = np.stack(
        [codec.recover(codec.compress(h, budget.m, q)) for h in channels]
    )
    analytic = None
    if source is not None:
        analytic = nmse_analytic(source, budget.m)
    return NmseReport(
        m=budget.m,
        delta_analytic=analytic,
        delta_empirical=nmse_empirical(channels, recovered),
        gamma=budget.gamma,
        gamma_fb=budget.gamma_fb,
    )
