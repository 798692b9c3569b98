"""Binary feedback frame.

Layout (little-endian):

    header   <BIBB   scheme code, m, q (0 when unquantized), flags
    scale    <d      quantizer scale (0.0 when unquantized)
    payload          quantized: 2m codes of q bits, real then imaginary
                     per coefficient, LSB first, padded to a byte;
                     unquantized: m complex128 values
    indices          variable policies only: m values of ceil(log2 N)
                     bits each, LSB first, padded to a byte

flags bit 0: indices present, bit 1: quantized, bits 4-7: policy code.
N is not carried; both ends know it from the shared configuration.
"""

import struct

import numpy as np

from csifb.codec.quantizer import Quantizer
from csifb.codec.registry import SCHEMES, SCHEMES_BY_CODE
from csifb.codec.selection import (
    POLICY_CODES,
    POLICY_KINDS,
    CompressedFeedback,
)
from csifb.errors import FrameError

HEADER = struct.Struct("<BIBB")
SCALE = struct.Struct("<d")

FLAG_INDICES = 0x01
FLAG_QUANTIZED = 0x02


def index_width(n: int) -> int:
    return max(1, (n - 1).bit_length())


def pack_uints(values: np.ndarray, width: int) -> bytes:
    values = np.asarray(values, dtype=np.uint64).reshape(-1)
    shifts = np.arange(width, dtype=np.uint64)
    bits = ((values[:, None] >> shifts) & np.uint64(1)).astype(np.uint8)
    return np.packbits(bits.reshape(-1), bitorder="little").tobytes()


def unpack_uints(data: bytes, count: int, width: int) -> np.ndarray:
    bits = np.unpackbits(
        np.frombuffer(data, dtype=np.uint8), bitorder="little"
    )[: count * width]
    weights = np.uint64(1) << np.arange(width, dtype=np.uint64)
    return (bits.reshape(count, width).astype(np.uint64) * weights).sum(
        axis=1
    ).astype(np.int64)


def _packed_size(count: int, width: int) -> int:
    return (count * width + 7) // 8


def encode_frame(fb: CompressedFeedback) -> bytes:
    if fb.scheme not in SCHEMES:
        raise FrameError(f"cannot frame unknown scheme '{fb.scheme}'")
    flags = POLICY_CODES[fb.policy] << 4
    if fb.indices is not None:
        flags |= FLAG_INDICES
    if fb.quantized:
        if fb.codes is None:
            raise FrameError("quantized feedback without codes")
        flags |= FLAG_QUANTIZED
        payload = pack_uints(fb.codes.reshape(-1), fb.q)
    else:
        payload = np.asarray(fb.coefficients, dtype="<c16").tobytes()
    parts = [
        HEADER.pack(SCHEMES[fb.scheme].code, fb.m, fb.q or 0, flags),
        SCALE.pack(fb.scale),
        payload,
    ]
    if fb.indices is not None:
        parts.append(pack_uints(fb.indices, index_width(fb.n)))
    return b"".join(parts)


def decode_frame(data: bytes, n: int) -> CompressedFeedback:
    if len(data) < HEADER.size + SCALE.size:
        raise FrameError(f"frame too short: {len(data)} bytes")
    code, m, q, flags = HEADER.unpack_from(data, 0)
    (scale,) = SCALE.unpack_from(data, HEADER.size)
    offset = HEADER.size + SCALE.size

    if code not in SCHEMES_BY_CODE:
        raise FrameError(f"unknown scheme code {code}")
    policy_code = flags >> 4
    if policy_code not in POLICY_KINDS:
        raise FrameError(f"unknown policy code {policy_code}")
    if m < 1 or m > n:
        raise FrameError(f"frame m = {m} outside [1, {n}]")

    quantized = bool(flags & FLAG_QUANTIZED)
    if quantized:
        if q < 1:
            raise FrameError("quantized frame with q = 0")
        size = _packed_size(2 * m, q)
    else:
        size = 16 * m
    if len(data) < offset + size:
        raise FrameError("frame truncated inside the coefficient payload")
    chunk = data[offset : offset + size]
    offset += size

    codes = None
    if quantized:
        codes = unpack_uints(chunk, 2 * m, q).reshape(m, 2)
        try:
            coefficients = Quantizer(q).decode(codes, scale)
        except ValueError as exc:
            raise FrameError(str(exc)) from exc
    else:
        coefficients = np.frombuffer(chunk, dtype="<c16").astype(complex)

    indices = None
    if flags & FLAG_INDICES:
        width = index_width(n)
        size = _packed_size(m, width)
        if len(data) < offset + size:
            raise FrameError("frame truncated inside the index list")
        indices = unpack_uints(data[offset : offset + size], m, width)
        offset += size
    if offset != len(data):
        raise FrameError(f"{len(data) - offset} trailing byte(s) in frame")

    try:
        return CompressedFeedback(
            scheme=SCHEMES_BY_CODE[code].name,
            policy=POLICY_KINDS[policy_code],
            n=n,
            coefficients=coefficients,
            indices=indices,
            q=q if quantized else None,
            scale=scale,
            codes=codes,
        )
    except ValueError as exc:
        raise FrameError(f"inconsistent frame: {exc}") from exc
