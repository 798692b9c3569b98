"""Channel vector orderings.

`ch` is the natural stacking (subcarrier-major). `ch2` groups the same
spatial entry across all subcarriers, h' = vec([h_1 ... h_Nf]^T), so that
each of the N_r * N_t spatial tracks is contiguous over frequency.
"""

import numpy as np

from csifb.errors import DimensionError

STRUCTURES = ("ch", "ch2")


def _check(h: np.ndarray, n_f: int) -> int:
    if n_f < 1:
        raise DimensionError(f"N_f must be >= 1, got {n_f}")
    if h.shape[-1] % n_f:
        raise DimensionError(
            f"vector length {h.shape[-1]} is not a multiple of N_f = {n_f}"
        )
    return h.shape[-1] // n_f


def restructure(h: np.ndarray, n_f: int, mode: str = "ch") -> np.ndarray:
    """Reorder a (batch of) stacked channel vector(s) into `mode` order."""
    h = np.asarray(h)
    n_s = _check(h, n_f)
    if mode == "ch":
        return h
    if mode != "ch2":
        raise DimensionError(f"unknown channel structure '{mode}'")
    batch = h.shape[:-1]
    blocks = h.reshape(batch + (n_f, n_s))
    return np.swapaxes(blocks, -1, -2).reshape(batch + (n_f * n_s,))


def unrestructure(h: np.ndarray, n_f: int, mode: str = "ch") -> np.ndarray:
    """Inverse of restructure."""
    h = np.asarray(h)
    n_s = _check(h, n_f)
    if mode == "ch":
        return h
    if mode != "ch2":
        raise DimensionError(f"unknown channel structure '{mode}'")
    batch = h.shape[:-1]
    tracks = h.reshape(batch + (n_s, n_f))
    return np.swapaxes(tracks, -1, -2).reshape(batch + (n_f * n_s,))
