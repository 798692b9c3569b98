"""Gray-mapped 16-QAM modem and Monte-Carlo bit error counting.

Each axis carries two bits on PAM-4: 00 -> -3, 01 -> -1, 11 -> +1,
10 -> +3; the constellation is scaled to unit average energy.
"""

from dataclasses import dataclass

import numpy as np

from csifb.errors import DimensionError
from csifb.linksim.precoding import PrecodedFrame, effective_gains
from csifb.metrics.ber import BerReport, ber_16qam, ber_lower_bound
from csifb.utils.helpers import complex_normal

BITS_PER_SYMBOL = 4
_SCALE = 1.0 / np.sqrt(10.0)
_PAM_LEVELS = np.array([-3.0, -1.0, 1.0, 3.0])
# level index -> Gray bit pair
_PAM_BITS = np.array([[0, 0], [0, 1], [1, 1], [1, 0]], dtype=np.uint8)
# bit pair (b0 * 2 + b1) -> level index
_PAM_INDEX = np.array([0, 1, 3, 2])


@dataclass(frozen=True)
class BitTally:
    errors: int
    bits: int

    @property
    def ber(self) -> float:
        return self.errors / self.bits if self.bits else 0.0

    def __add__(self, other: "BitTally") -> "BitTally":
        return BitTally(self.errors + other.errors, self.bits + other.bits)


def modulate(bits: np.ndarray) -> np.ndarray:
    """(..., 4k) bits -> (..., k) unit-energy symbols."""
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.shape[-1] % BITS_PER_SYMBOL:
        raise DimensionError("bit count must be a multiple of 4")
    quads = bits.reshape(bits.shape[:-1] + (-1, BITS_PER_SYMBOL))
    i_level = _PAM_LEVELS[_PAM_INDEX[quads[..., 0] * 2 + quads[..., 1]]]
    q_level = _PAM_LEVELS[_PAM_INDEX[quads[..., 2] * 2 + quads[..., 3]]]
    return (i_level + 1j * q_level) * _SCALE


def _slice(values: np.ndarray) -> np.ndarray:
    index = np.digitize(values / _SCALE, [-2.0, 0.0, 2.0])
    return _PAM_BITS[index]


def demodulate(symbols: np.ndarray) -> np.ndarray:
    """Minimum-distance hard decisions, inverse of modulate."""
    symbols = np.asarray(symbols)
    i_bits = _slice(symbols.real)
    q_bits = _slice(symbols.imag)
    quads = np.concatenate([i_bits, q_bits], axis=-1)
    return quads.reshape(symbols.shape[:-1] + (-1,))


def random_bits(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.integers(0, 2, size=shape, dtype=np.uint8)


def equalize(received: np.ndarray, gain: np.ndarray) -> np.ndarray:
    """Divide by the effective gain; a dead stream is left as is."""
    gain = np.asarray(gain)
    safe = np.where(np.abs(gain) > 0.0, gain, 1.0)
    return received / safe


def transmit_16qam(
    frame: PrecodedFrame,
    h_true: np.ndarray,
    noise_power: float,
    n_symbols: int,
    rng: np.random.Generator,
) -> BitTally:
    """Send n_symbols per stream and subcarrier through H W, count errors.

    Each stream is detected on its own antenna by dividing by its
    effective gain sqrt(p_k) h_k . w_k; interference is treated as noise.
    """
    if n_symbols < 1:
        raise DimensionError(f"need at least one symbol, got {n_symbols}")
    gains = effective_gains(h_true, frame)
    amplitudes = np.sqrt(frame.powers)
    n_f, streams = frame.powers.shape

    bits = random_bits(rng, (n_f, streams, n_symbols * BITS_PER_SYMBOL))
    symbols = modulate(bits)
    received = gains @ (amplitudes[:, :, None] * symbols)
    received = received + np.sqrt(noise_power) * complex_normal(
        rng, received.shape
    )
    direct = np.diagonal(gains, axis1=1, axis2=2) * amplitudes
    decided = demodulate(equalize(received, direct[:, :, None]))
    errors = int(np.count_nonzero(decided != bits))
    return BitTally(errors=errors, bits=bits.size)


def awgn_16qam(
    gain: complex,
    noise_power: float,
    n_symbols: int,
    rng: np.random.Generator,
) -> BitTally:
    """Single stream y = g x + n; symbol SNR is |g|^2 / noise_power."""
    if n_symbols < 1:
        raise DimensionError(f"need at least one symbol, got {n_symbols}")
    bits = random_bits(rng, n_symbols * BITS_PER_SYMBOL)
    received = gain * modulate(bits) + np.sqrt(noise_power) * complex_normal(
        rng, (n_symbols,)
    )
    decided = demodulate(equalize(received, gain))
    return BitTally(int(np.count_nonzero(decided != bits)), bits.size)


def beamforming_ber(
    channels,
    codec,
    m: int,
    sigma2: float,
    symbols_per_trial: int,
    rng: np.random.Generator,
    q: int | None = None,
    bound_source=None,
) -> BerReport:
    """Single-user beamforming link over the whole channel vector.

    For every true channel h the receiver feeds back h~ and the
    transmitter beamforms with w = h~ / ||h~||, giving the scalar gain
    w^H h and effective SNR mu = |w^H h|^2 / sigma2. The bound is
    f(E[mu]) from `bound_source` (a covariance model or eigenvalues) if
    given, else from the sample mean of mu.
    """
    channels = np.atleast_2d(np.asarray(channels))
    if sigma2 <= 0:
        raise DimensionError(f"sigma2 must be positive, got {sigma2}")
    per_trial = []
    mus = []
    total = BitTally(0, 0)
    for h in channels:
        h_tilde = codec.recover(codec.compress(h, m, q))
        norm = np.linalg.norm(h_tilde)
        gain = np.vdot(h_tilde, h) / norm if norm > 0 else 0.0
        mus.append(abs(gain) ** 2 / sigma2)
        tally = awgn_16qam(gain, sigma2, symbols_per_trial, rng)
        per_trial.append(tally.ber)
        total = total + tally

    mu_mean = float(np.mean(mus))
    if bound_source is not None:
        bound = ber_lower_bound(bound_source, m, sigma2)
    else:
        bound = ber_16qam(mu_mean)
    trials = len(per_trial)
    if trials > 1:
        stderr = float(np.std(per_trial, ddof=1) / np.sqrt(trials))
    else:
        p = total.ber
        stderr = float(np.sqrt(p * (1.0 - p) / max(total.bits, 1)))
    return BerReport(
        mu_mean=mu_mean,
        ber_bound=float(bound),
        ber_empirical=total.ber,
        standard_error=stderr,
        trials=trials,
    )
