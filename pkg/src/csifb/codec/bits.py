"""Feedback bit accounting.

Fixed selections cost 2mQ bits, full feedback 2NQ, and variable
selections add ceil(2 log2 prod_{i<m} (N - i)) index bits. The quantizer
scale is side information and is not counted.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

from csifb.codec.registry import SchemeSpec, get_scheme
from csifb.codec.selection import FCF_EQUIDISTANT, FULL, VARIABLE_KINDS
from csifb.errors import BudgetError, DimensionError


@dataclass(frozen=True)
class FeedbackBudget:
    scheme: str
    n: int
    m: int
    q: int
    coefficient_bits: int
    index_bits: int
    total_bits: int
    gamma: float
    gamma_fb: float

    @property
    def uncompressed_bits(self) -> int:
        return 2 * self.n * self.q

    @property
    def feedback_reduction_pct(self) -> float:
        return (self.gamma_fb - 1.0) / self.gamma_fb * 100.0


@lru_cache(maxsize=4096)
def index_bits(n: int, m: int) -> int:
    """ceil(2 * log2(N! / (N - m)!)), computed exactly on integers."""
    if not 0 <= m <= n:
        raise DimensionError(f"need 0 <= m <= N, got m={m}, N={n}")
    arrangements = math.perm(n, m)
    if arrangements <= 1:
        return 0
    return (arrangements * arrangements - 1).bit_length()


def feedback_bits(
    scheme: str | SchemeSpec, m: int, q: int, n: int
) -> FeedbackBudget:
    spec = get_scheme(scheme)
    if q < 1:
        raise DimensionError(f"q must be >= 1, got {q}")
    if not 1 <= m <= n:
        raise DimensionError(f"need 1 <= m <= N, got m={m}, N={n}")
    if spec.policy == FULL:
        m = n
    coefficient_bits = 2 * m * q
    extra = index_bits(n, m) if spec.policy in VARIABLE_KINDS else 0
    total = coefficient_bits + extra
    return FeedbackBudget(
        scheme=spec.name,
        n=n,
        m=m,
        q=q,
        coefficient_bits=coefficient_bits,
        index_bits=extra,
        total_bits=total,
        gamma=n / m,
        gamma_fb=2 * n * q / total,
    )


def admissible_m(spec: SchemeSpec, n: int, n_s: int) -> list[int]:
    """Kept-coefficient counts the scheme can realize, ascending."""
    if spec.policy == FULL:
        return [n]
    if spec.policy == FCF_EQUIDISTANT:
        return list(range(n_s, n + 1, n_s))
    return list(range(1, n + 1))


def budget_for_bits(
    scheme: str | SchemeSpec, max_bits: int, n: int, q: int, n_s: int = 1
) -> FeedbackBudget:
    """Largest admissible m whose total bits fit in max_bits."""
    spec = get_scheme(scheme)
    candidates = admissible_m(spec, n, n_s)
    # total bits grow with m, so bisect for the last fitting candidate
    lo, hi = 0, len(candidates)
    while lo < hi:
        mid = (lo + hi) // 2
        if feedback_bits(spec, candidates[mid], q, n).total_bits <= max_bits:
            lo = mid + 1
        else:
            hi = mid
    if lo == 0:
        raise BudgetError(
            f"{spec.name}: no m >= 1 fits {max_bits} bits "
            f"(N={n}, Q={q})"
        )
    return feedback_bits(spec, candidates[lo - 1], q, n)


def budget_for_target(
    scheme: str | SchemeSpec,
    gamma_fb_target: float,
    n: int,
    q: int,
    n_s: int = 1,
) -> FeedbackBudget:
    """Largest admissible m with gamma_fb >= gamma_fb_target."""
    if gamma_fb_target < 1.0:
        raise DimensionError(
            f"gamma_fb target must be >= 1, got {gamma_fb_target}"
        )
    max_bits = math.floor(2 * n * q / gamma_fb_target + 1e-9)
    return budget_for_bits(scheme, max_bits, n, q, n_s)
