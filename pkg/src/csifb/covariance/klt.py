"""KLT operators: s = U^H h and h = U s.

`KltOperator` applies the Kronecker-factored basis of a CovarianceModel
mode by mode on the (N_f, N_t, N_r) tensor view of h, so the cost per
vector is O(N (N_f + N_t + N_r)). `DenseKlt` wraps an explicit
eigendecomposition and is used for permuted or estimated covariances.
Both accept a single vector or a batch with vectors along the last axis.
"""

import numpy as np

from csifb.covariance.model import CovarianceModel
from csifb.errors import DimensionError
from csifb.utils.linalg import checked_eigh, numerical_rank


def _check_length(x: np.ndarray, n: int) -> np.ndarray:
    x = np.asarray(x)
    if x.shape[-1] != n:
        raise DimensionError(
            f"vector length {x.shape[-1]} does not match KLT size {n}"
        )
    return x


class KltOperator:
    """Factored KLT of a CovarianceModel, rows by descending eigenvalue."""

    def __init__(self, model: CovarianceModel):
        self.model = model
        self.eigenvalues = model.eigenvalues
        self._u_f = model.u_f
        self._u_t = model.u_t
        self._u_r = model.u_r
        self._order = model.order

    @property
    def n(self) -> int:
        return self.model.n

    def rank(self) -> int:
        return self.model.rank()

    def forward(self, h: np.ndarray) -> np.ndarray:
        h = _check_length(h, self.n)
        batch = h.shape[:-1]
        tensor = h.reshape(batch + self.model.shape)
        coeffs = np.einsum(
            "ia,jb,kc,...ijk->...abc",
            self._u_f.conj(),
            self._u_t.conj(),
            self._u_r.conj(),
            tensor,
            optimize=True,
        )
        return coeffs.reshape(batch + (self.n,))[..., self._order]

    def inverse(self, s: np.ndarray) -> np.ndarray:
        s = _check_length(s, self.n)
        batch = s.shape[:-1]
        flat = np.zeros(batch + (self.n,), dtype=complex)
        flat[..., self._order] = s
        tensor = flat.reshape(batch + self.model.shape)
        h = np.einsum(
            "ai,bj,ck,...ijk->...abc",
            self._u_f,
            self._u_t,
            self._u_r,
            tensor,
            optimize=True,
        )
        return h.reshape(batch + (self.n,))


class DenseKlt:
    """KLT of an explicit Hermitian PSD matrix."""

    def __init__(
        self,
        covariance: np.ndarray,
        rank_tol: float | None = None,
        name: str = "covariance",
    ):
        values, vectors = checked_eigh(covariance, name=name)
        self.eigenvalues = values
        self.basis = vectors
        self._rank = numerical_rank(values, rank_tol)

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    def rank(self) -> int:
        return self._rank

    def forward(self, h: np.ndarray) -> np.ndarray:
        h = _check_length(h, self.n)
        return h @ self.basis.conj()

    def inverse(self, s: np.ndarray) -> np.ndarray:
        s = _check_length(s, self.n)
        return s @ self.basis.T


def klt_matrix(model: CovarianceModel) -> KltOperator:
    return KltOperator(model)
