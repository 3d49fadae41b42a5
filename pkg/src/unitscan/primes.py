"""Prime generation and primality testing for scan ranges up to 1e9."""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Iterator

RANGE_LIMIT = 10**9

# Strong-pseudoprime witnesses covering every n < 2^64 (Sinclair / Sorenson-Webster set).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality test, correct for all n < 2^64."""
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n == q:
            return True
        if n % q == 0:
            return False
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeRange:
    """Inclusive scan bounds [lo, hi]."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo < 2:
            raise ValueError(f"range must start at 2 or above, got {self.lo}")
        if self.hi < self.lo:
            raise ValueError(f"empty range: lo={self.lo} > hi={self.hi}")
        if self.hi > RANGE_LIMIT:
            raise ValueError(f"hi={self.hi} exceeds the {RANGE_LIMIT} scan budget")


def sieve_upto(n: int) -> list[int]:
    """All primes <= n by a plain sieve; intended for small n (base primes)."""
    if n < 2:
        return []
    mark = bytearray([1]) * (n + 1)
    mark[0] = mark[1] = 0
    for i in range(2, isqrt(n) + 1):
        if mark[i]:
            mark[i * i :: i] = bytearray((n - i * i) // i + 1)
    return [i for i in range(2, n + 1) if mark[i]]


def primes_in(rng: PrimeRange, segment_size: int = 1 << 20) -> Iterator[int]:
    """Yield the primes in [rng.lo, rng.hi] in ascending order.

    Segmented odd-only sieve; memory use is bounded by segment_size bytes
    regardless of the range, so ranges up to the budget are safe to stream.
    """
    if segment_size < 8:
        raise ValueError("segment_size too small")
    lo, hi = rng.lo, rng.hi
    if lo <= 2 <= hi:
        yield 2
    base = [q for q in sieve_upto(isqrt(hi)) if q > 2]
    start = max(lo, 3)
    if start % 2 == 0:
        start += 1
    span = 2 * segment_size  # integers covered per segment
    for seg_lo in range(start, hi + 1, span):
        seg_hi = min(seg_lo + span - 2, hi)
        if seg_hi % 2 == 0:
            seg_hi -= 1
        n_odds = (seg_hi - seg_lo) // 2 + 1
        if n_odds <= 0:
            continue
        mark = bytearray([1]) * n_odds
        for q in base:
            q2 = q * q
            if q2 > seg_hi:
                break
            first = max(q2, ((seg_lo + q - 1) // q) * q)
            if first % 2 == 0:
                first += q
            i0 = (first - seg_lo) // 2
            if i0 < n_odds:
                mark[i0::q] = bytearray((n_odds - i0 - 1) // q + 1)
        for i in range(n_odds):
            if mark[i]:
                yield seg_lo + 2 * i


def count_primes(rng: PrimeRange, segment_size: int = 1 << 20) -> int:
    return sum(1 for _ in primes_in(rng, segment_size))
