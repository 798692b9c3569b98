"""2-D antenna arrays and their spatial correlation matrices.

Elements are indexed row-major, top-left to bottom-right: element
(v, h) has index v * n_h + h. The correlation between two elements at
grid distance d (in units of the element spacing) is rho ** d, which
yields a symmetric block-Toeplitz matrix of Toeplitz blocks.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import toeplitz

from csifb.errors import DimensionError
from csifb.utils.linalg import checked_eigh, numerical_rank, psd_sqrtm


@dataclass(frozen=True)
class AntennaArray:
    n_h: int
    n_v: int
    rho: float

    def __post_init__(self):
        if int(self.n_h) < 1 or int(self.n_v) < 1:
            raise DimensionError(
                f"array needs n_h >= 1 and n_v >= 1, got "
                f"({self.n_h}, {self.n_v})"
            )
        if not 0.0 <= float(self.rho) <= 1.0:
            raise DimensionError(f"rho must lie in [0, 1], got {self.rho}")

    @property
    def n(self) -> int:
        return int(self.n_h) * int(self.n_v)

    @classmethod
    def square(cls, a: int, rho: float) -> "AntennaArray":
        return cls(n_h=a, n_v=a, rho=rho)


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    """Real symmetric PSD correlation matrix with unit diagonal."""

    entries: np.ndarray
    eigenvalues: np.ndarray = field(init=False, repr=False, compare=False)
    eigenvectors: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DimensionError(
                f"correlation matrix must be square, got {entries.shape}"
            )
        if not np.allclose(entries, entries.T, rtol=0.0, atol=1e-12):
            raise DimensionError("correlation matrix must be symmetric")
        if not np.allclose(np.diag(entries), 1.0, rtol=0.0, atol=1e-12):
            raise DimensionError("correlation matrix needs a unit diagonal")
        values, vectors = checked_eigh(entries, name="correlation matrix")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "eigenvalues", values)
        object.__setattr__(self, "eigenvectors", vectors)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def rank(self, rank_tol: float | None = None) -> int:
        return numerical_rank(self.eigenvalues, rank_tol)

    def sqrtm(self) -> np.ndarray:
        return psd_sqrtm(self.entries, name="correlation matrix")

    @classmethod
    def identity(cls, n: int) -> "CorrelationMatrix":
        return cls(np.eye(n))


def _toeplitz_block(n_h: int, rho: float, offset: int) -> np.ndarray:
    distance = np.sqrt(offset**2 + np.arange(n_h) ** 2)
    # 0.0 ** 0.0 == 1.0 keeps the diagonal at one for rho = 0
    return toeplitz(np.power(float(rho), distance))


def build_correlation(array: AntennaArray) -> CorrelationMatrix:
    """BlkTz[T_1, ..., T_nv] with T_m = Tz[rho ** sqrt((m-1)^2 + k^2)]."""
    blocks = [
        _toeplitz_block(array.n_h, array.rho, m) for m in range(array.n_v)
    ]
    layout = [
        [blocks[abs(i - j)] for j in range(array.n_v)]
        for i in range(array.n_v)
    ]
    return CorrelationMatrix(np.block(layout))
