from csifb.covariance.empirical import (
    EmpiricalCovariance,
    empirical_covariance,
)
from csifb.covariance.klt import DenseKlt, KltOperator, klt_matrix
from csifb.covariance.model import (
    CovarianceModel,
    DistortionFreeRatio,
    FrequencyCovariance,
    analytic_covariance,
    distortion_free_ratio,
    frequency_correlation,
)

__all__ = [
    "CovarianceModel",
    "DenseKlt",
    "DistortionFreeRatio",
    "EmpiricalCovariance",
    "FrequencyCovariance",
    "KltOperator",
    "analytic_covariance",
    "distortion_free_ratio",
    "empirical_covariance",
    "frequency_correlation",
    "klt_matrix",
]
