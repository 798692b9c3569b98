import numpy as np

from csifb.covariance.klt import DenseKlt
from csifb.covariance.model import CovarianceModel
from csifb.errors import DimensionError


def check_permutation(perm, n: int) -> np.ndarray:
    perm = np.asarray(perm)
    if perm.shape != (n,) or not np.issubdtype(perm.dtype, np.integer):
        raise DimensionError(f"permutation must be {n} integer positions")
    if not np.array_equal(np.sort(perm), np.arange(n)):
        raise DimensionError("not a permutation of 0..N-1")
    return perm.astype(np.int64)


def permute_model(
    h: np.ndarray, perm, model: CovarianceModel
) -> tuple[np.ndarray, DenseKlt]:
    """(P h, KLT of P C_h P^T) with (P h)[i] = h[perm[i]].

    Reordering the channel entries only permutes the rows of the KLT
    basis, so recovery error is unchanged.
    """
    h = np.asarray(h)
    perm = check_permutation(perm, model.n)
    if h.shape[-1] != model.n:
        raise DimensionError(
            f"channel length {h.shape[-1]} does not match N = {model.n}"
        )
    covariance = model.dense()
    permuted = covariance[np.ix_(perm, perm)]
    klt = DenseKlt(
        permuted, rank_tol=model.rank_tol, name="permuted covariance"
    )
    return h[..., perm], klt
