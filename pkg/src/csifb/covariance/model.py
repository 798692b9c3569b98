"""Kronecker-factored channel covariance C_h = C_f (x) R_t (x) R_r.

The N x N product is never formed unless explicitly asked for with
`dense()`, and even then only up to `settings.DENSE_THRESHOLD`. The
eigensystem is assembled from the three factor eigensystems.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import toeplitz

from csifb.channel.arrays import CorrelationMatrix
from csifb.channel.fading import DelayProfile
from csifb.config import settings
from csifb.errors import DimensionError
from csifb.utils.linalg import checked_eigh, numerical_rank
from csifb.utils.logger import logger


@dataclass(frozen=True, eq=False)
class FrequencyCovariance:
    """Hermitian Toeplitz frequency correlation C_f.

    `c` holds c_n^2 = E[H(n) H(1)^*] and is the first column of the
    matrix; the first row is its conjugate.
    """

    c: np.ndarray
    eigenvalues: np.ndarray = field(init=False, repr=False)
    eigenvectors: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        c = np.array(self.c, dtype=complex).reshape(-1)
        if c.size < 1:
            raise DimensionError("frequency correlation needs N_f >= 1")
        if abs(c[0].imag) > 1e-12 * max(abs(c[0].real), 1.0):
            raise DimensionError(
                f"c_1 must be real (channel power), got {c[0]}"
            )
        c[0] = c[0].real
        c.setflags(write=False)
        object.__setattr__(self, "c", c)
        values, vectors = checked_eigh(self.matrix(), name="C_f")
        object.__setattr__(self, "eigenvalues", values)
        object.__setattr__(self, "eigenvectors", vectors)

    @property
    def n(self) -> int:
        return self.c.size

    @property
    def sigma_h2(self) -> float:
        return float(self.c[0].real)

    def matrix(self) -> np.ndarray:
        return toeplitz(self.c)

    def rank(self, rank_tol: float | None = None) -> int:
        return numerical_rank(self.eigenvalues, rank_tol)


def frequency_correlation(
    profile: DelayProfile, sigma_h2: float, n_f: int
) -> FrequencyCovariance:
    """c_n^2 = sigma_h2 * sum_l d_l exp(-j 2 pi n l / N_f), n = 0..N_f-1."""
    if n_f < profile.n_taps:
        raise DimensionError(
            f"N_f = {n_f} must be >= number of taps L = {profile.n_taps}"
        )
    if sigma_h2 <= 0:
        raise DimensionError(f"sigma_h2 must be positive, got {sigma_h2}")
    return FrequencyCovariance(sigma_h2 * np.fft.fft(profile.taps, n=n_f))


def _truncate(values: np.ndarray, rank_tol: float) -> np.ndarray:
    values = values.copy()
    top = float(values.max()) if values.size else 0.0
    values[values <= rank_tol * top] = 0.0
    return values


class CovarianceModel:
    """Channel covariance with a factored eigensystem.

    Combined eigenvalue (i, j, k) is lambda_f[i] * lambda_t[j] *
    lambda_r[k] with eigenvector u_f[i] (x) u_t[j] (x) u_r[k]. Factor
    eigenvalues at or below rank_tol * max are set to exactly zero, so
    rank(C_h) is the product of the factor ranks. `order` sorts the
    combined eigenvalues descending; ties keep the lexicographic order of
    the (i, j, k) triples.

    Instances are never mutated. A statistics update means building a new
    model from the new factors.
    """

    def __init__(
        self,
        c_f: FrequencyCovariance,
        r_t: CorrelationMatrix,
        r_r: CorrelationMatrix,
        rank_tol: float | None = None,
    ):
        self.c_f = c_f
        self.r_t = r_t
        self.r_r = r_r
        self.rank_tol = settings.RANK_TOL if rank_tol is None else rank_tol

        self.lambda_f = _truncate(c_f.eigenvalues, self.rank_tol)
        self.lambda_t = _truncate(r_t.eigenvalues, self.rank_tol)
        self.lambda_r = _truncate(r_r.eigenvalues, self.rank_tol)
        self.u_f = c_f.eigenvectors
        self.u_t = r_t.eigenvectors
        self.u_r = r_r.eigenvectors

        combined = np.kron(
            np.kron(self.lambda_f, self.lambda_t), self.lambda_r
        )
        self.order = np.argsort(-combined, kind="stable")
        self.eigenvalues = combined[self.order]
        self.factor_index = np.stack(
            np.unravel_index(self.order, self.shape), axis=1
        )
        for array in (self.order, self.eigenvalues, self.factor_index):
            array.setflags(write=False)

        logger.debug(
            f"Covariance model built: N={self.n} "
            f"(N_f={self.n_f}, N_t={self.n_t}, N_r={self.n_r}), "
            f"rank={self.rank()}"
        )

    @property
    def n_f(self) -> int:
        return self.c_f.n

    @property
    def n_t(self) -> int:
        return self.r_t.n

    @property
    def n_r(self) -> int:
        return self.r_r.n

    @property
    def n_s(self) -> int:
        return self.n_t * self.n_r

    @property
    def n(self) -> int:
        return self.n_f * self.n_s

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.n_f, self.n_t, self.n_r)

    @property
    def sigma_h2(self) -> float:
        return self.c_f.sigma_h2

    def trace(self) -> float:
        return float(
            np.trace(self.c_f.matrix()).real
            * np.trace(self.r_t.entries)
            * np.trace(self.r_r.entries)
        )

    def factor_ranks(self) -> tuple[int, int, int]:
        return (
            int(np.count_nonzero(self.lambda_f)),
            int(np.count_nonzero(self.lambda_t)),
            int(np.count_nonzero(self.lambda_r)),
        )

    def rank(self) -> int:
        rank_f, rank_t, rank_r = self.factor_ranks()
        return rank_f * rank_t * rank_r

    def _check_dense(self, what: str):
        if self.n > settings.DENSE_THRESHOLD:
            raise DimensionError(
                f"refusing to materialize {what} with N = {self.n} > "
                f"{settings.DENSE_THRESHOLD} (CSIFB_DENSE_THRESHOLD)"
            )

    def dense(self) -> np.ndarray:
        """Materialized C_h, small models only."""
        self._check_dense("C_h")
        return np.kron(
            np.kron(self.c_f.matrix(), self.r_t.entries), self.r_r.entries
        )

    def dense_eigenvectors(self) -> np.ndarray:
        """Columns u_f (x) u_t (x) u_r in descending-eigenvalue order."""
        self._check_dense("the KLT basis")
        basis = np.kron(np.kron(self.u_f, self.u_t), self.u_r)
        return basis[:, self.order]


def analytic_covariance(
    c_f: FrequencyCovariance,
    r_t: CorrelationMatrix,
    r_r: CorrelationMatrix,
    rank_tol: float | None = None,
) -> CovarianceModel:
    return CovarianceModel(c_f, r_t, r_r, rank_tol=rank_tol)


@dataclass(frozen=True)
class DistortionFreeRatio:
    gamma_star: float
    gamma_f: float
    gamma_t: float
    gamma_r: float


def distortion_free_ratio(model: CovarianceModel) -> DistortionFreeRatio:
    """gamma* = N / rank(C_h), split per Kronecker factor."""
    rank_f, rank_t, rank_r = model.factor_ranks()
    if min(rank_f, rank_t, rank_r) == 0:
        raise DimensionError("covariance model has a zero factor")
    gamma_f = model.n_f / rank_f
    gamma_t = model.n_t / rank_t
    gamma_r = model.n_r / rank_r
    return DistortionFreeRatio(
        gamma_star=gamma_f * gamma_t * gamma_r,
        gamma_f=gamma_f,
        gamma_t=gamma_t,
        gamma_r=gamma_r,
    )
