import numpy as np

from csifb.errors import DimensionError


def spectral_efficiency(sinrs: np.ndarray) -> float:
    """Mean over subcarriers of sum_k log2(1 + SINR_k), in bit/s/Hz.

    `sinrs` has shape (N_f, streams); a 1-D array is one subcarrier.
    """
    sinrs = np.asarray(sinrs, dtype=float)
    if sinrs.ndim == 1:
        sinrs = sinrs[None, :]
    if sinrs.ndim != 2 or sinrs.size == 0:
        raise DimensionError(f"expected (N_f, streams) SINRs, {sinrs.shape}")
    if np.any(sinrs < 0):
        raise DimensionError("SINR must be >= 0")
    return float(np.mean(np.sum(np.log2(1.0 + sinrs), axis=1)))
