"""Uniform midtread scalar quantizer for complex feedback coefficients.

Real and imaginary parts are quantized separately onto 2**q - 1 levels
spaced step(scale) apart and centred on zero, so a zero coefficient is
sent back as exactly zero. Codes are offset to [0, 2**q - 2] and fit in
q bits; the all-ones word is never produced. scale is the largest
component magnitude of the vector and is sent as side information
outside the counted feedback bits. The error per component is at most
scale / (2**q - 1).
"""

from dataclasses import replace

import numpy as np

from csifb.codec.selection import CompressedFeedback
from csifb.errors import DimensionError


class Quantizer:
    def __init__(self, q: int):
        if int(q) < 1:
            raise DimensionError(f"q must be >= 1, got {q}")
        if int(q) > 32:
            raise DimensionError(f"q must be <= 32, got {q}")
        self.q = int(q)
        self.levels = (1 << self.q) - 1
        # code of the zero level
        self.offset = self.levels // 2

    @staticmethod
    def scale_of(values: np.ndarray) -> float:
        values = np.asarray(values, dtype=complex)
        if values.size == 0:
            return 0.0
        return float(
            max(np.max(np.abs(values.real)), np.max(np.abs(values.imag)))
        )

    def step(self, scale: float) -> float:
        return 2.0 * scale / self.levels

    def encode(
        self, values: np.ndarray, scale: float | None = None
    ) -> tuple[np.ndarray, float]:
        """Codes of shape (m, 2), columns (real, imaginary)."""
        values = np.asarray(values, dtype=complex).reshape(-1)
        if scale is None:
            scale = self.scale_of(values)
        parts = np.stack([values.real, values.imag], axis=1)
        if scale <= 0.0:
            return np.full(parts.shape, self.offset, dtype=np.int64), 0.0
        cells = np.rint(parts / self.step(scale))
        cells = np.clip(cells, -self.offset, self.offset)
        return (cells + self.offset).astype(np.int64), float(scale)

    def decode(self, codes: np.ndarray, scale: float) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64).reshape(-1, 2)
        if np.any(codes < 0) or np.any(codes >= self.levels):
            raise DimensionError(
                f"quantizer codes must lie in [0, {self.levels})"
            )
        parts = (codes - self.offset) * self.step(scale)
        return parts[:, 0] + 1j * parts[:, 1]


def quantize_feedback(fb: CompressedFeedback, q: int) -> CompressedFeedback:
    """Quantize the selected coefficients; indices are left untouched."""
    quantizer = Quantizer(q)
    codes, scale = quantizer.encode(fb.coefficients)
    return replace(
        fb,
        coefficients=quantizer.decode(codes, scale),
        q=quantizer.q,
        scale=scale,
        codes=codes,
    )
