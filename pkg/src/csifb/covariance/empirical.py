import numpy as np

from csifb.config import settings
from csifb.covariance.klt import DenseKlt
from csifb.errors import DimensionError
from csifb.utils.linalg import checked_eigh


class EmpiricalCovariance:
    """Cumulative moving average of h h^H over a stream of realizations.

    Single writer: `update` must not be called concurrently.
    """

    def __init__(self, n: int):
        if n < 1:
            raise DimensionError(f"N must be >= 1, got {n}")
        if n > settings.DENSE_THRESHOLD:
            raise DimensionError(
                f"empirical covariance needs a dense N x N matrix; N = {n} "
                f"exceeds {settings.DENSE_THRESHOLD}"
            )
        self.n = int(n)
        self.count = 0
        self._mean = np.zeros((n, n), dtype=complex)

    def update(self, h: np.ndarray) -> "EmpiricalCovariance":
        """Fold one vector or a (batch, N) array into the running mean."""
        samples = np.atleast_2d(np.asarray(h))
        if samples.ndim != 2 or samples.shape[1] != self.n:
            raise DimensionError(
                f"expected vectors of length {self.n}, got {samples.shape}"
            )
        added = samples.shape[0]
        if added == 0:
            return self
        outer = samples.T @ samples.conj()
        total = self.count + added
        self._mean = (self.count * self._mean + outer) / total
        self.count = total
        return self

    def matrix(self) -> np.ndarray:
        return self._mean.copy()

    def eigensystem(self) -> tuple[np.ndarray, np.ndarray]:
        hermitian = 0.5 * (self._mean + self._mean.conj().T)
        return checked_eigh(hermitian, name="empirical covariance")

    def klt(self, rank_tol: float | None = None) -> DenseKlt:
        """KLT built from the current estimate."""
        hermitian = 0.5 * (self._mean + self._mean.conj().T)
        return DenseKlt(
            hermitian, rank_tol=rank_tol, name="empirical covariance"
        )


def empirical_covariance(stream, n: int) -> EmpiricalCovariance:
    """Accumulate an iterable of channel vectors (or batches)."""
    estimate = EmpiricalCovariance(n)
    for h in stream:
        estimate.update(h)
    return estimate
