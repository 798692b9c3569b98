"""Hermitian eigen-helpers shared by the channel and covariance packages."""

import numpy as np
from scipy import linalg

from csifb.config import settings
from csifb.errors import DimensionError, NotPositiveSemidefiniteError
from csifb.utils.logger import logger


def checked_eigh(
    matrix: np.ndarray, name: str = "matrix", psd_tol: float | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian PSD matrix, sorted descending.

    Eigenvalues in (-psd_tol * lambda_max, 0) are clamped to zero with a
    warning; anything more negative raises NotPositiveSemidefiniteError.
    Ties keep LAPACK's ascending order reversed, which is deterministic.

    Returns:
        (eigenvalues, eigenvectors) with eigenvectors as columns.
    """
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionError(f"{name} must be square, got {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise DimensionError(f"{name} has non-finite entries")
    tol = settings.PSD_TOL if psd_tol is None else psd_tol

    values, vectors = linalg.eigh(matrix)
    values = values[::-1].copy()
    vectors = vectors[:, ::-1].copy()

    scale = float(np.max(np.abs(values))) if values.size else 0.0
    floor = -tol * scale
    if values.size and values[-1] < floor:
        raise NotPositiveSemidefiniteError(
            f"{name} is not PSD: smallest eigenvalue {values[-1]:.3e} "
            f"below tolerance {floor:.3e}"
        )
    negative = values < 0
    if np.any(negative):
        logger.warning(
            f"{name}: clamped {int(negative.sum())} eigenvalue(s) in "
            f"[{values[-1]:.3e}, 0) to zero"
        )
        values[negative] = 0.0
    return values, vectors


def psd_sqrtm(
    matrix: np.ndarray, name: str = "matrix", psd_tol: float | None = None
) -> np.ndarray:
    """Unique PSD square root, tolerant of zero eigenvalues."""
    values, vectors = checked_eigh(matrix, name=name, psd_tol=psd_tol)
    return (vectors * np.sqrt(values)) @ vectors.conj().T


def numerical_rank(values: np.ndarray, rank_tol: float | None = None) -> int:
    """Count eigenvalues above rank_tol * lambda_max."""
    tol = settings.RANK_TOL if rank_tol is None else rank_tol
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return 0
    top = float(np.max(values))
    if top <= 0.0:
        return 0
    return int(np.count_nonzero(values > tol * top))
