"""Zero-forcing MU-MIMO precoding and per-stream SINR.

Channel arrays are (N_f, streams, N_t): row k of a subcarrier is the
channel seen by stream k, one stream per receive antenna.
"""

from dataclasses import dataclass

import numpy as np

from csifb.config import settings
from csifb.errors import DimensionError
from csifb.utils.logger import logger


@dataclass(frozen=True, eq=False)
class PrecodedFrame:
    """Unit-norm precoder columns (N_f, N_t, S) and powers (N_f, S)."""

    precoders: np.ndarray
    powers: np.ndarray
    regularized: int = 0

    @property
    def streams(self) -> int:
        return self.precoders.shape[2]

    def transmit_power(self) -> np.ndarray:
        """Radiated power per subcarrier."""
        norms = np.sum(np.abs(self.precoders) ** 2, axis=1)
        return np.sum(self.powers * norms, axis=1)


def aggregate_channels(per_user: list[np.ndarray]) -> np.ndarray:
    """Stack users' (N_f, N_r, N_t) matrices into (N_f, K*N_r, N_t)."""
    return np.concatenate([np.asarray(h) for h in per_user], axis=1)


def zf_precoder(
    h_agg: np.ndarray, power: float, eps: float | None = None
) -> PrecodedFrame:
    """W = H^H (H H^H)^-1 per subcarrier from recovered CSI.

    Columns are normalized and share `power` equally. A numerically
    rank-deficient Gram matrix is loaded with eps * tr(G) / S on its
    diagonal and counted in `regularized`.
    """
    h_agg = np.asarray(h_agg, dtype=complex)
    if h_agg.ndim != 3:
        raise DimensionError(f"expected (N_f, S, N_t), got {h_agg.shape}")
    n_f, streams, n_t = h_agg.shape
    if streams > n_t:
        raise DimensionError(
            f"ZF needs streams <= N_t, got {streams} streams for "
            f"N_t = {n_t}"
        )
    if power < 0:
        raise DimensionError(f"power must be >= 0, got {power}")
    eps = settings.ZF_EPS if eps is None else eps

    h_herm = np.conj(np.swapaxes(h_agg, 1, 2))
    gram = h_agg @ h_herm
    spectrum = np.linalg.eigvalsh(gram)
    top = spectrum[:, -1]
    deficient = (top <= 0.0) | (spectrum[:, 0] <= settings.RANK_TOL * top)
    regularized = int(np.count_nonzero(deficient))
    if regularized:
        trace = np.trace(gram, axis1=1, axis2=2).real
        loading = np.where(deficient, eps * trace / streams, 0.0)
        # all-zero CSI still gets an invertible Gram matrix
        loading = np.where(deficient & (loading <= 0.0), eps, loading)
        gram = gram + loading[:, None, None] * np.eye(streams)
        logger.warning(
            f"ZF: regularized {regularized} of {n_f} rank-deficient "
            f"subcarrier(s)"
        )

    identity = np.broadcast_to(np.eye(streams), gram.shape)
    w = h_herm @ np.linalg.solve(gram, identity)
    norms = np.linalg.norm(w, axis=1, keepdims=True)
    w = w / np.where(norms > 0.0, norms, 1.0)
    powers = np.full((n_f, streams), power / streams)
    return PrecodedFrame(precoders=w, powers=powers, regularized=regularized)


def effective_gains(h_true: np.ndarray, frame: PrecodedFrame) -> np.ndarray:
    """G[n, k, j] = h_k(n) . w_j(n), shape (N_f, S, S)."""
    h_true = np.asarray(h_true)
    if h_true.shape[0] != frame.precoders.shape[0] or (
        h_true.shape[1] != frame.streams
        or h_true.shape[2] != frame.precoders.shape[1]
    ):
        raise DimensionError(
            f"channel {h_true.shape} does not match precoder "
            f"{frame.precoders.shape}"
        )
    return h_true @ frame.precoders


def measure_sinr(
    h_true: np.ndarray, frame: PrecodedFrame, noise_power: float
) -> np.ndarray:
    """SINR per (subcarrier, stream) with the true channel."""
    if noise_power <= 0:
        raise DimensionError(f"noise power must be positive: {noise_power}")
    received = np.abs(effective_gains(h_true, frame)) ** 2
    received = received * frame.powers[:, None, :]
    signal = np.diagonal(received, axis1=1, axis2=2)
    interference = np.maximum(received.sum(axis=2) - signal, 0.0)
    return signal / (interference + noise_power)
