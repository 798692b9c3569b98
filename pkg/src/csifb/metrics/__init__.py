from csifb.metrics.ber import (
    BerReport,
    ber_16qam,
    ber_lower_bound,
    mean_effective_snr,
    qfunc,
)
from csifb.metrics.nmse import (
    NmseReport,
    nmse_analytic,
    nmse_curve,
    nmse_empirical,
    nmse_report,
)
from csifb.metrics.se import spectral_efficiency

__all__ = [
    "BerReport",
    "NmseReport",
    "ber_16qam",
    "ber_lower_bound",
    "mean_effective_snr",
    "nmse_analytic",
    "nmse_curve",
    "nmse_empirical",
    "nmse_report",
    "qfunc",
    "spectral_efficiency",
]
