"""Selection matrices S as index sets.

Positions are 0-based. Fixed policies are pure functions of
(kind, m, N[, N_f]); the variable policy depends on the coefficients and
its positions travel with the feedback.
"""

from dataclasses import dataclass

import numpy as np

from csifb.errors import DimensionError

PCA_FIXED = "pca_fixed"
FCF_EQUIDISTANT = "fcf_equidistant"
INDEX_EQUIDISTANT = "index_equidistant"
TCF_FIXED_BOUNDARY = "tcf_fixed_boundary"
VARIABLE_MAGNITUDE = "variable_magnitude"
FULL = "full"

# Frame codes live in the high nibble of the flags byte.
POLICY_CODES = {
    PCA_FIXED: 0,
    FCF_EQUIDISTANT: 1,
    INDEX_EQUIDISTANT: 2,
    TCF_FIXED_BOUNDARY: 3,
    VARIABLE_MAGNITUDE: 4,
    FULL: 5,
}
POLICY_KINDS = {code: kind for kind, code in POLICY_CODES.items()}
VARIABLE_KINDS = frozenset({VARIABLE_MAGNITUDE})


@dataclass(frozen=True)
class SelectionPolicy:
    kind: str
    m: int

    def __post_init__(self):
        if self.kind not in POLICY_CODES:
            raise DimensionError(f"unknown selection policy '{self.kind}'")
        if int(self.m) < 1:
            raise DimensionError(f"m must be >= 1, got {self.m}")

    @property
    def is_variable(self) -> bool:
        return self.kind in VARIABLE_KINDS


@dataclass(frozen=True, eq=False)
class CompressedFeedback:
    """Selected coefficients s' = S s plus everything needed to undo S.

    `codes` holds the (m, 2) quantizer output (real, imaginary) when the
    feedback is quantized; `coefficients` then holds the reconstruction.
    """

    scheme: str
    policy: str
    n: int
    coefficients: np.ndarray
    indices: np.ndarray | None = None
    q: int | None = None
    scale: float = 0.0
    codes: np.ndarray | None = None

    def __post_init__(self):
        coefficients = np.array(self.coefficients, dtype=complex).reshape(-1)
        object.__setattr__(self, "coefficients", coefficients)
        if self.indices is not None:
            indices = np.array(self.indices, dtype=np.int64).reshape(-1)
            if indices.size != coefficients.size:
                raise DimensionError(
                    f"{indices.size} indices for {coefficients.size} "
                    f"coefficients"
                )
            if indices.size and (
                indices[0] < 0
                or indices[-1] >= self.n
                or np.any(np.diff(indices) <= 0)
            ):
                raise DimensionError(
                    f"indices must be strictly increasing in [0, {self.n})"
                )
            object.__setattr__(self, "indices", indices)

    @property
    def m(self) -> int:
        return self.coefficients.size

    @property
    def quantized(self) -> bool:
        return self.q is not None


def equidistant_grid(k: int, length: int) -> np.ndarray:
    """k evenly spread positions in [0, length), both ends included.

    Position i is round(i * (length - 1) / (k - 1)) with halves rounded
    up; k = 1 picks the centre.
    """
    if not 1 <= k <= length:
        raise DimensionError(f"cannot pick {k} of {length} positions")
    if k == 1:
        return np.array([(length - 1) // 2], dtype=np.int64)
    i = np.arange(k, dtype=np.int64)
    return (2 * i * (length - 1) + (k - 1)) // (2 * (k - 1))


def fixed_positions(
    policy: SelectionPolicy, n: int, n_f: int | None = None
) -> np.ndarray:
    m = int(policy.m)
    if m > n:
        raise DimensionError(f"m = {m} exceeds N = {n}")
    if policy.kind == PCA_FIXED:
        return np.arange(m, dtype=np.int64)
    if policy.kind == FULL:
        if m != n:
            raise DimensionError(f"full feedback needs m = N = {n}, got {m}")
        return np.arange(n, dtype=np.int64)
    if policy.kind == TCF_FIXED_BOUNDARY:
        head = (m + 1) // 2
        tail = m // 2
        return np.concatenate(
            [np.arange(head), np.arange(n - tail, n)]
        ).astype(np.int64)
    if policy.kind == INDEX_EQUIDISTANT:
        return equidistant_grid(m, n)
    if policy.kind == FCF_EQUIDISTANT:
        if n_f is None or n % n_f:
            raise DimensionError(
                "fcf_equidistant needs N_f dividing N for the track layout"
            )
        n_s = n // n_f
        if m % n_s:
            raise DimensionError(
                f"fcf_equidistant needs m to be a multiple of N_r*N_t = "
                f"{n_s}, got {m}"
            )
        grid = equidistant_grid(m // n_s, n_f)
        # tracks are contiguous in the ch2 ordering
        return (np.arange(n_s)[:, None] * n_f + grid[None, :]).reshape(-1)
    raise DimensionError(f"'{policy.kind}' is not a fixed policy")


def magnitude_positions(s: np.ndarray, m: int) -> np.ndarray:
    """The m largest-|s_i| positions, ascending; ties keep lower index."""
    if m > s.size:
        raise DimensionError(f"m = {m} exceeds N = {s.size}")
    strongest = np.argsort(-np.abs(s), kind="stable")[:m]
    return np.sort(strongest)


def select(
    s: np.ndarray,
    policy: SelectionPolicy,
    scheme: str = "",
    n_f: int | None = None,
) -> CompressedFeedback:
    """Apply S to the sparse vector s."""
    s = np.asarray(s).reshape(-1)
    n = s.size
    if policy.m > n:
        raise DimensionError(f"m = {policy.m} exceeds N = {n}")
    if policy.is_variable:
        positions = magnitude_positions(s, int(policy.m))
        indices = positions
    else:
        positions = fixed_positions(policy, n, n_f)
        indices = None
    return CompressedFeedback(
        scheme=scheme,
        policy=policy.kind,
        n=n,
        coefficients=s[positions],
        indices=indices,
    )
