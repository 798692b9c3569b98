import hashlib
import struct

import numpy as np

# Seeds are 64-bit: blake2b(master || drop || stream), little-endian.
_SEED_FORMAT = "<QQQ"


def derive_seed(master: int, drop: int, stream: int) -> int:
    """Stable per-(drop, stream) seed derived from the master seed.

    The hash does not depend on process, platform or PYTHONHASHSEED, so
    drops can be scheduled on any worker in any order.
    """
    payload = struct.pack(
        _SEED_FORMAT,
        master & 0xFFFFFFFFFFFFFFFF,
        drop & 0xFFFFFFFFFFFFFFFF,
        stream & 0xFFFFFFFFFFFFFFFF,
    )
    digest = hashlib.blake2b(payload, digest_size=8).digest()
    return int.from_bytes(digest, "little")


def make_rng(master: int, drop: int, stream: int) -> np.random.Generator:
    return np.random.default_rng(derive_seed(master, drop, stream))


def db_to_linear(value_db: float) -> float:
    return float(10.0 ** (value_db / 10.0))


def dbm_to_mw(value_dbm: float) -> float:
    return db_to_linear(value_dbm)


def complex_normal(
    rng: np.random.Generator, shape: tuple[int, ...]
) -> np.ndarray:
    """Unit-variance circularly symmetric complex normal samples."""
    real = rng.standard_normal(shape)
    imag = rng.standard_normal(shape)
    return (real + 1j * imag) / np.sqrt(2.0)
