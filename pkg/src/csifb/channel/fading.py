"""Spatially correlated Rayleigh fading MIMO-OFDM channel synthesis.

Pipeline for one realization:
- draw L time-domain taps per (rx, tx) pair, tap l ~ CN(0, sigma_h2 * d_l)
- take the unnormalized N_f-point DFT along the tap axis (H_iid(n))
- colour each subcarrier as R_r^(1/2) H_iid(n) (R_t^(1/2))^H
- stack h = [vec(H(1)); ...; vec(H(N_f))], vec being column-major
"""

from dataclasses import dataclass

import numpy as np

from csifb.channel.arrays import CorrelationMatrix
from csifb.errors import DimensionError
from csifb.utils.helpers import complex_normal


@dataclass(frozen=True, eq=False)
class DelayProfile:
    """Per-tap average powers, normalized to sum to one."""

    taps: np.ndarray

    def __post_init__(self):
        taps = np.array(self.taps, dtype=float).reshape(-1)
        if taps.size < 1:
            raise DimensionError("delay profile needs at least one tap")
        if np.any(taps < 0) or not np.all(np.isfinite(taps)):
            raise DimensionError("tap powers must be finite and >= 0")
        total = float(taps.sum())
        if total <= 0.0:
            raise DimensionError("delay profile has zero total power")
        taps = taps / total
        taps.setflags(write=False)
        object.__setattr__(self, "taps", taps)

    @property
    def n_taps(self) -> int:
        return self.taps.size

    @classmethod
    def exponential(cls, n_taps: int, decay: float = 2.0) -> "DelayProfile":
        """d_l proportional to exp(-l / decay), l = 0..L-1."""
        if decay <= 0:
            raise DimensionError(f"decay must be positive, got {decay}")
        return cls(np.exp(-np.arange(n_taps) / decay))

    @classmethod
    def uniform(cls, n_taps: int) -> "DelayProfile":
        return cls(np.ones(n_taps))

    @classmethod
    def from_powers(cls, powers) -> "DelayProfile":
        return cls(np.asarray(powers, dtype=float))


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """One MIMO-OFDM channel draw.

    per_subcarrier has shape (N_f, N_r, N_t); h is the stacked N-vector.
    """

    per_subcarrier: np.ndarray
    h: np.ndarray
    sigma_h2: float

    @property
    def n_f(self) -> int:
        return self.per_subcarrier.shape[0]

    @property
    def n_r(self) -> int:
        return self.per_subcarrier.shape[1]

    @property
    def n_t(self) -> int:
        return self.per_subcarrier.shape[2]

    @property
    def n(self) -> int:
        return self.h.size


def stack_subcarriers(per_subcarrier: np.ndarray) -> np.ndarray:
    """h = [vec(H(1)); ...; vec(H(N_f))] with column-major vec."""
    per_subcarrier = np.asarray(per_subcarrier)
    if per_subcarrier.ndim != 3:
        raise DimensionError(
            f"expected (N_f, N_r, N_t) array, got {per_subcarrier.shape}"
        )
    # (N_f, N_t, N_r) in C order walks rows fastest inside each column
    return np.ascontiguousarray(per_subcarrier.transpose(0, 2, 1)).reshape(
        -1
    )


def unstack_subcarriers(
    h: np.ndarray, n_f: int, n_r: int, n_t: int
) -> np.ndarray:
    """Inverse of stack_subcarriers; accepts a leading batch axis."""
    h = np.asarray(h)
    if h.shape[-1] != n_f * n_r * n_t:
        raise DimensionError(
            f"vector length {h.shape[-1]} != N_f*N_r*N_t = "
            f"{n_f * n_r * n_t}"
        )
    cube = h.reshape(h.shape[:-1] + (n_f, n_t, n_r))
    return np.swapaxes(cube, -1, -2)


def sample_time_domain(
    n_r: int,
    n_t: int,
    profile: DelayProfile,
    sigma_h2: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Time-domain taps of shape (N_r, N_t, L), tap l ~ CN(0, s2 * d_l)."""
    if n_r < 1 or n_t < 1:
        raise DimensionError(f"invalid antenna counts ({n_r}, {n_t})")
    if sigma_h2 < 0:
        raise DimensionError(f"sigma_h2 must be >= 0, got {sigma_h2}")
    iid = complex_normal(rng, (n_r, n_t, profile.n_taps))
    return iid * np.sqrt(sigma_h2 * profile.taps)


def to_frequency_domain(taps: np.ndarray, n_f: int) -> np.ndarray:
    """H_iid(n)[r, t] = sum_l tap[r, t, l] exp(-j 2 pi n l / N_f).

    Returns shape (N_f, N_r, N_t).
    """
    taps = np.asarray(taps)
    n_taps = taps.shape[-1]
    if n_f < n_taps:
        raise DimensionError(
            f"N_f = {n_f} must be >= number of taps L = {n_taps}"
        )
    # zero-padded unnormalized FFT is exactly the truncated DFT sum
    spectrum = np.fft.fft(taps, n=n_f, axis=-1)
    return np.moveaxis(spectrum, -1, 0)


def apply_spatial_correlation(
    h_iid: np.ndarray,
    r_t: CorrelationMatrix,
    r_r: CorrelationMatrix,
    sigma_h2: float = 1.0,
) -> ChannelRealization:
    """H(n) = R_r^(1/2) H_iid(n) (R_t^(1/2))^H for every subcarrier."""
    h_iid = np.asarray(h_iid)
    if h_iid.ndim != 3:
        raise DimensionError(
            f"expected (N_f, N_r, N_t) array, got {h_iid.shape}"
        )
    _, n_r, n_t = h_iid.shape
    if r_r.n != n_r or r_t.n != n_t:
        raise DimensionError(
            f"correlation sizes (R_r {r_r.n}, R_t {r_t.n}) do not match "
            f"channel ({n_r}, {n_t})"
        )
    root_r = r_r.sqrtm()
    root_t = r_t.sqrtm()
    per_subcarrier = root_r @ h_iid @ root_t.conj().T
    return ChannelRealization(
        per_subcarrier=per_subcarrier,
        h=stack_subcarriers(per_subcarrier),
        sigma_h2=float(sigma_h2),
    )


class ChannelGenerator:
    """Binds the channel statistics so draws only need an rng.

    The square roots of R_t and R_r are computed once; the generator is
    read-only afterwards and can be shared by parallel trials.
    """

    def __init__(
        self,
        r_t: CorrelationMatrix,
        r_r: CorrelationMatrix,
        profile: DelayProfile,
        n_f: int,
    ):
        if n_f < profile.n_taps:
            raise DimensionError(
                f"N_f = {n_f} must be >= number of taps L = "
                f"{profile.n_taps}"
            )
        self.r_t = r_t
        self.r_r = r_r
        self.profile = profile
        self.n_f = int(n_f)
        self._root_t = r_t.sqrtm()
        self._root_r = r_r.sqrtm()

    @property
    def n(self) -> int:
        return self.n_f * self.r_t.n * self.r_r.n

    def draw(
        self, rng: np.random.Generator, sigma_h2: float = 1.0
    ) -> ChannelRealization:
        taps = sample_time_domain(
            self.r_r.n, self.r_t.n, self.profile, sigma_h2, rng
        )
        h_iid = to_frequency_domain(taps, self.n_f)
        per_subcarrier = self._root_r @ h_iid @ self._root_t.conj().T
        return ChannelRealization(
            per_subcarrier=per_subcarrier,
            h=stack_subcarriers(per_subcarrier),
            sigma_h2=float(sigma_h2),
        )

    def draw_batch(
        self, rng: np.random.Generator, count: int, sigma_h2: float = 1.0
    ) -> np.ndarray:
        """Stacked channel vectors of `count` draws, shape (count, N)."""
        return np.stack(
            [self.draw(rng, sigma_h2).h for _ in range(count)], axis=0
        )
