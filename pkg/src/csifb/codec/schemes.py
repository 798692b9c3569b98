"""Compress / recover pipeline shared by every feedback scheme.

    h --restructure--> h' --Psi--> s --S--> s' (--quantize-->)
    s' --S^T--> zero-filled s --Psi^-1--> h' --inverse restructure--> h~

FCF skips the zero-fill: kept entries are spline-interpolated along
frequency (or along the vector index for the `ch` structure).
"""

import numpy as np
from scipy.interpolate import CubicSpline

from csifb.channel.structure import restructure, unrestructure
from csifb.codec.quantizer import quantize_feedback
from csifb.codec.registry import FCF, SCF, TCF, SchemeSpec, get_scheme
from csifb.codec.selection import (
    FCF_EQUIDISTANT,
    INDEX_EQUIDISTANT,
    CompressedFeedback,
    SelectionPolicy,
    fixed_positions,
    select,
)
from csifb.errors import DimensionError, UnboundModelError


def sparsify(h: np.ndarray, family: str, klt=None) -> np.ndarray:
    """s = Psi h for the identity, unitary IDFT or KLT representation."""
    h = np.asarray(h, dtype=complex)
    if family == FCF:
        return h.copy()
    if family == TCF:
        return np.fft.ifft(h, axis=-1, norm="ortho")
    if family == SCF:
        if klt is None:
            raise UnboundModelError("SCF needs a covariance model (KLT)")
        return klt.forward(h)
    raise DimensionError(f"unknown representation '{family}'")


def desparsify(s: np.ndarray, family: str, klt=None) -> np.ndarray:
    """h = Psi^-1 s."""
    s = np.asarray(s, dtype=complex)
    if family == FCF:
        return s.copy()
    if family == TCF:
        return np.fft.fft(s, axis=-1, norm="ortho")
    if family == SCF:
        if klt is None:
            raise UnboundModelError("SCF needs a covariance model (KLT)")
        return klt.inverse(s)
    raise DimensionError(f"unknown representation '{family}'")


def spline_tracks(
    values: np.ndarray, grid: np.ndarray, length: int
) -> np.ndarray:
    """Natural cubic spline of each row of `values` sampled at `grid`.

    Real and imaginary parts are interpolated separately and evaluated on
    0..length-1. A single sample is held constant.
    """
    values = np.atleast_2d(values)
    if grid.size == 1:
        return np.repeat(values, length, axis=1)
    x = np.arange(length)
    real = CubicSpline(grid, values.real, axis=1, bc_type="natural")(x)
    imag = CubicSpline(grid, values.imag, axis=1, bc_type="natural")(x)
    return real + 1j * imag


class FeedbackCodec:
    """One scheme bound to its channel dimensions (and KLT for SCF).

    Immutable after construction; compress and recover are pure.
    """

    def __init__(
        self, scheme: str | SchemeSpec, n_f: int, n_s: int, klt=None
    ):
        self.spec = get_scheme(scheme)
        self.n_f = int(n_f)
        self.n_s = int(n_s)
        if self.spec.needs_model and klt is None:
            raise UnboundModelError(
                f"{self.spec.name} needs a covariance model (KLT)"
            )
        if klt is not None and klt.n != self.n:
            raise DimensionError(
                f"KLT size {klt.n} does not match N = {self.n}"
            )
        self.klt = klt

    @property
    def name(self) -> str:
        return self.spec.name

    @property
    def n(self) -> int:
        return self.n_f * self.n_s

    def policy(self, m: int) -> SelectionPolicy:
        return SelectionPolicy(self.spec.policy, int(m))

    def sparsify(self, h: np.ndarray) -> np.ndarray:
        h = np.asarray(h)
        if h.shape[-1] != self.n:
            raise DimensionError(
                f"channel length {h.shape[-1]} does not match N = {self.n}"
            )
        h_struct = restructure(h, self.n_f, self.spec.structure)
        return sparsify(h_struct, self.spec.family, self.klt)

    def compress(
        self, h: np.ndarray, m: int, q: int | None = None
    ) -> CompressedFeedback:
        s = self.sparsify(np.asarray(h).reshape(-1))
        fb = select(s, self.policy(m), scheme=self.name, n_f=self.n_f)
        if q is not None:
            fb = quantize_feedback(fb, q)
        return fb

    def recover(self, fb: CompressedFeedback) -> np.ndarray:
        return recover(fb, self)


def _positions(fb: CompressedFeedback, codec: FeedbackCodec) -> np.ndarray:
    if fb.indices is not None:
        if fb.indices.size and fb.indices[-1] >= codec.n:
            raise DimensionError(
                f"feedback index {fb.indices[-1]} out of range N = {codec.n}"
            )
        return fb.indices
    policy = SelectionPolicy(fb.policy, fb.m)
    if policy.is_variable:
        raise DimensionError("variable selection feedback carries no indices")
    return fixed_positions(policy, codec.n, codec.n_f)


def recover(fb: CompressedFeedback, codec: FeedbackCodec) -> np.ndarray:
    """h~ in the natural (ch) ordering from the fed-back coefficients."""
    if codec is None:
        raise UnboundModelError("recovery needs the scheme context")
    if fb.scheme and fb.scheme != codec.name:
        raise DimensionError(
            f"feedback scheme '{fb.scheme}' does not match codec "
            f"'{codec.name}'"
        )
    if fb.n != codec.n:
        raise DimensionError(f"feedback N = {fb.n} != codec N = {codec.n}")
    positions = _positions(fb, codec)

    if fb.policy == FCF_EQUIDISTANT:
        tracks = fb.coefficients.reshape(codec.n_s, -1)
        grid = positions[: tracks.shape[1]]
        h_struct = spline_tracks(tracks, grid, codec.n_f).reshape(-1)
    elif fb.policy == INDEX_EQUIDISTANT:
        h_struct = spline_tracks(fb.coefficients, positions, codec.n)[0]
    else:
        s = np.zeros(codec.n, dtype=complex)
        s[positions] = fb.coefficients
        h_struct = desparsify(s, codec.spec.family, codec.klt)
    return unrestructure(h_struct, codec.n_f, codec.spec.structure)
