"""Randomized Hamming-distance sampling primitives.

A NaiveHDSampler keeps a rate-r Bernoulli subset of X's positions and
answers interval queries with Binomial(HD, r)-distributed counts; answers
over disjoint intervals are independent because they read disjoint parts
of the sample.  CappedBinomialSample carries the (cap, slack, rate)
bookkeeping under which such counts compose additively.  The gap tester
distinguishes HD <= low from HD > high by uniform sampling with
replacement and a midpoint cut.

Randomness is consumed at build/call time only; a built sampler answers
deterministically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .core import RandomSource, Text, parse_threshold, sample_rate_positions


class NaiveHDSampler:
    """Counts sampled mismatches of X[x..x+l) against Y[y..y+l).

    Build reads the sampled X characters once; each query reads the aligned
    Y characters under the sample, so query cost follows the sample density.
    """

    __slots__ = ("positions", "chars", "rate", "xlen", "_y")

    def __init__(self, x: Text, y: Text, rate: float,
                 rng: RandomSource) -> None:
        self.positions = sample_rate_positions(len(x), rate, rng)
        self.chars = x.read_at(self.positions)
        self.rate = rate
        self.xlen = len(x)
        self._y = y

    def query(self, x: int, y: int, length: int) -> int:
        if x < 0 or y < 0 or x + length > self.xlen \
                or y + length > len(self._y):
            raise IndexError(f"query ({x}, {y}, {length}) out of range "
                             f"for |X|={self.xlen}, |Y|={len(self._y)}")
        lo = int(np.searchsorted(self.positions, x))
        hi = int(np.searchsorted(self.positions, x + length))
        if lo == hi:
            return 0
        win = self.positions[lo:hi]
        ych = self._y.read_at(win - x + y)
        return int((self.chars[lo:hi] != ych).sum())

    def query_capped(self, x: int, y: int, length: int, cap: int,
                     rng: RandomSource) -> Union[int, float]:
        """query, but reading at most cap of the window's sampled
        positions.  An overfull window gets a uniform without-replacement
        subset and its count scaled back up by m/cap, which keeps the
        expectation at rate * HD; windows within the cap take the exact
        path and consume no randomness."""
        if cap < 1:
            raise ValueError(f"cap must be positive: {cap}")
        lo = int(np.searchsorted(self.positions, x))
        hi = int(np.searchsorted(self.positions, x + length))
        if hi - lo <= cap:
            return self.query(x, y, length)
        if x < 0 or y < 0 or x + length > self.xlen \
                or y + length > len(self._y):
            raise IndexError(f"query ({x}, {y}, {length}) out of range "
                             f"for |X|={self.xlen}, |Y|={len(self._y)}")
        m = hi - lo
        pick = lo + np.sort(rng.gen.choice(m, size=cap, replace=False))
        win = self.positions[pick]
        ych = self._y.read_at(win - x + y)
        hits = int((self.chars[pick] != ych).sum())
        return hits * (m / cap)


def build_naive_sampler(x: Text, y: Text, r: float,
                        rng: RandomSource) -> NaiveHDSampler:
    return NaiveHDSampler(x, y, r, rng)


def naive_hd_query(s: NaiveHDSampler, x: int, y: int, length: int) -> int:
    return s.query(x, y, length)


@dataclass(frozen=True)
class CappedBinomialSample:
    """A count whose law is Binomial(h, rate_r) up to slack_delta while the
    underlying distance h stays at most cap_d (and dominates it beyond).

    slack_delta is exact bookkeeping: compositions add it, nothing ever
    re-derives it.  Subsample-rescaled counts are floats with the same
    expectation; exact counts stay ints.
    """

    value: Union[int, float]
    cap_d: int
    slack_delta: Fraction
    rate_r: float

    def __post_init__(self) -> None:
        if self.value < 0:
            raise ValueError(f"value must be nonnegative: {self.value}")
        if self.cap_d < 1:
            raise ValueError(f"cap must be positive: {self.cap_d}")
        if not isinstance(self.slack_delta, Fraction):
            object.__setattr__(self, "slack_delta",
                               parse_threshold(self.slack_delta))
        if self.slack_delta < 0:
            raise ValueError(f"slack must be nonnegative: {self.slack_delta}")
        if not 0.0 < self.rate_r <= 1.0:
            raise ValueError(f"rate must be in (0, 1]: {self.rate_r}")


def combine_capped(b1: CappedBinomialSample,
                   b2: CappedBinomialSample) -> CappedBinomialSample:
    """Sum of independent capped samples: values add, slacks add."""
    if b1.rate_r != b2.rate_r:
        raise ValueError(f"mismatched rates: {b1.rate_r} vs {b2.rate_r}")
    if b1.cap_d != b2.cap_d:
        raise ValueError(f"mismatched caps: {b1.cap_d} vs {b2.cap_d}")
    return CappedBinomialSample(b1.value + b2.value, b1.cap_d,
                                b1.slack_delta + b2.slack_delta, b1.rate_r)


@dataclass(frozen=True)
class GapVerdict:
    verdict: str  # "LOW" | "HIGH"
    low_bound: int
    high_bound: int

    def __post_init__(self) -> None:
        if self.verdict not in ("LOW", "HIGH"):
            raise ValueError(f"bad verdict: {self.verdict}")


def hamming_gap_test(x: Text, y: Text, y_off: int, low: int, high: int,
                     fail_prob: float, rng: RandomSource) -> GapVerdict:
    """Distinguish HD(X, Y[y_off..y_off+|X|)) <= low from > high.

    ceil(6 (|X|/(high-low)) ln(1/fail_prob)) positions are drawn uniformly
    with replacement; HIGH iff the scaled mismatch count clears the
    midpoint (low+high)/2.  When that many draws would cost more than
    reading everything (3|X| or more), the distance is counted exactly and
    the verdict cannot fail.
    """
    n = len(x)
    if y_off < 0 or n + y_off > len(y):
        raise IndexError(f"window [{y_off}..{y_off + n}) outside |Y|={len(y)}")
    if low < 0 or low >= high:
        raise ValueError(f"need 0 <= low < high, got ({low}, {high})")
    if not 0.0 < fail_prob < 1.0:
        raise ValueError(f"fail_prob must be in (0, 1): {fail_prob}")
    if n == 0:
        return GapVerdict("LOW", low, high)
    num = math.ceil(6.0 * n / (high - low) * math.log(1.0 / fail_prob))
    if num >= 3 * n:
        idx = np.arange(n, dtype=np.int64)
        mism = int((x.read_at(idx) != y.read_at(idx + y_off)).sum())
        verdict = "HIGH" if 2 * mism > low + high else "LOW"
        return GapVerdict(verdict, low, high)
    if num == 0:
        # gap so wide that HD <= |X| can never exceed it; nothing to sample
        return GapVerdict("LOW", low, high)
    idx = np.asarray(rng.integers(0, n, size=num), dtype=np.int64)
    mism = int((x.read_at(idx) != y.read_at(idx + y_off)).sum())
    verdict = "HIGH" if 2 * mism * n > (low + high) * num else "LOW"
    return GapVerdict(verdict, low, high)
