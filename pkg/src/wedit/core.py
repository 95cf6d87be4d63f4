"""Shared primitives: probe-counted texts, scaled costs, thresholds, RNG.

Cost model used throughout the package: insertions and deletions cost 1,
substitutions cost 1/a for an integer weight a >= 1.  Internally every cost
is an integer count of 1/a units (indel = a units, substitution = 1 unit),
so arithmetic is exact.  Thresholds stay `Fraction` until the final floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

import numpy as np

# Sentinel for "no alignment within budget".  Large enough that any sum of
# real costs stays far below it, small enough to add without overflow.
INF = 10**18


def units_to_value(units: int, a: int) -> Fraction:
    """Integer 1/a-units -> exact distance value."""
    return Fraction(units, a)


def threshold_units(k: Fraction, a: int) -> int:
    """Largest representable cost not exceeding k, in 1/a units (floor(a*k))."""
    return math.floor(k * a)


def parse_threshold(text: Union[str, int, float, Fraction]) -> Fraction:
    """Parse a threshold argument into an exact nonnegative Fraction.

    Accepts "3/7", "0.25", "12", ints, and Fractions.  Floats are accepted
    for convenience but go through str() first so "0.1" means 1/10, not the
    binary float.
    """
    if isinstance(text, Fraction):
        k = text
    elif isinstance(text, int):
        k = Fraction(text)
    elif isinstance(text, float):
        k = Fraction(str(text))
    else:
        k = Fraction(str(text).strip())
    if k < 0:
        raise ValueError(f"threshold must be nonnegative, got {k}")
    return k


@dataclass(frozen=True)
class ScaledCost:
    """A nonnegative cost as an integer number of 1/a units.

    Python ints do not wrap, so unit sums are exact at any magnitude; the
    weight check is the only guard arithmetic needs.
    """

    units: int
    weight_a: int

    def __post_init__(self) -> None:
        if self.units < 0:
            raise ValueError(f"negative cost units: {self.units}")
        if self.weight_a < 1:
            raise ValueError(f"weight_a must be >= 1, got {self.weight_a}")

    @property
    def value(self) -> Fraction:
        return Fraction(self.units, self.weight_a)

    def _check(self, other: "ScaledCost") -> None:
        if self.weight_a != other.weight_a:
            raise ValueError(
                f"mixed weights: {self.weight_a} vs {other.weight_a}")

    def __lt__(self, other: "ScaledCost") -> bool:
        self._check(other)
        return self.units < other.units

    def __le__(self, other: "ScaledCost") -> bool:
        self._check(other)
        return self.units <= other.units


def cost_add(x: ScaledCost, y: ScaledCost) -> ScaledCost:
    """Sum two costs of the same weight, exactly."""
    if x.weight_a != y.weight_a:
        raise ValueError(f"mixed weights: {x.weight_a} vs {y.weight_a}")
    return ScaledCost(x.units + y.units, x.weight_a)


@dataclass(frozen=True)
class Threshold:
    """A distance bound k, kept exact, plus its floor in 1/a units.

    scaled_units is the top of the cost grid ({0, 1/a, ..., floor(ak)/a});
    the final "<= k" decision compares against `value` itself, so a
    non-integral k between grid points still rejects correctly.
    """

    value: Fraction
    weight_a: int

    def __post_init__(self) -> None:
        if not isinstance(self.value, Fraction):
            object.__setattr__(self, "value", parse_threshold(self.value))
        if self.value < 0:
            raise ValueError(f"threshold must be nonnegative: {self.value}")
        if self.weight_a < 1:
            raise ValueError(f"weight_a must be >= 1, got {self.weight_a}")

    @property
    def scaled_units(self) -> int:
        return math.floor(self.value * self.weight_a)


class ProbeCounter:
    """Tally of character reads.

    Contract: +1 per character access, re-reads of the same position count
    again.  Nothing ever decrements the count; algorithms that want to pay
    once cache what they read.
    """

    __slots__ = ("count",)

    def __init__(self) -> None:
        self.count = 0

    def charge(self, n: int = 1) -> None:
        self.count += n

    def __repr__(self) -> str:
        return f"ProbeCounter(count={self.count})"


class ByteText:
    """A byte string with probe-counted access.

    `text[i]` and `read_at(indices)` charge the counter.  `.data` exposes the
    raw uint8 array without charging: that path is reserved for the brute
    force oracles and for index construction that charges its reads in bulk
    up front.  Approximation code must go through the counted accessors.
    """

    __slots__ = ("data", "counter")

    def __init__(self, data: Union[bytes, bytearray, np.ndarray],
                 counter: Optional[ProbeCounter] = None) -> None:
        if isinstance(data, np.ndarray):
            arr = np.ascontiguousarray(data, dtype=np.uint8)
        else:
            arr = np.frombuffer(bytes(data), dtype=np.uint8)
        self.data = arr
        self.counter = counter if counter is not None else ProbeCounter()

    def __len__(self) -> int:
        return len(self.data)

    def __getitem__(self, i: int) -> int:
        self.counter.charge(1)
        return int(self.data[i])

    def read_at(self, indices: np.ndarray) -> np.ndarray:
        """Counted gather: charges one probe per index, including repeats."""
        self.counter.charge(len(indices))
        return self.data[indices]

    def view(self, lo: int, hi: int) -> "ByteTextView":
        return ByteTextView(self, lo, hi)


class ByteTextView:
    """Window [lo, hi) over a ByteText; reads charge the base counter."""

    __slots__ = ("base", "lo", "hi")

    def __init__(self, base: ByteText, lo: int, hi: int) -> None:
        assert 0 <= lo <= hi <= len(base)
        self.base = base
        self.lo = lo
        self.hi = hi

    def __len__(self) -> int:
        return self.hi - self.lo

    def __getitem__(self, i: int) -> int:
        return self.base[self.lo + i]

    def read_at(self, indices: np.ndarray) -> np.ndarray:
        return self.base.read_at(np.asarray(indices) + self.lo)

    @property
    def data(self) -> np.ndarray:
        return self.base.data[self.lo:self.hi]

    @property
    def counter(self) -> ProbeCounter:
        return self.base.counter


Text = Union[ByteText, ByteTextView]


def load_text(source, counter: Optional[ProbeCounter] = None) -> ByteText:
    """Read a whole byte source into a ByteText.

    `source` may be a path, a binary file object, or bytes.  Probe counting
    is effectively off by default: the text gets a private counter nobody
    reads.  Pass one explicitly to instrument.
    """
    if isinstance(source, (bytes, bytearray)):
        raw = bytes(source)
    elif hasattr(source, "read"):
        raw = source.read()
    else:
        with open(source, "rb") as fh:
            raw = fh.read()
    return ByteText(raw, counter)


class RandomSource:
    """Deterministic tree of PRNG streams.

    Each node is numpy's PCG64 seeded via SeedSequence((seed, *path)).
    `child(*labels)` extends the path, so any component can derive its own
    stream from stable integer labels and the result is independent of the
    order in which components are built.  PCG64 output is bit-stable across
    platforms under numpy's random-stream compatibility policy.
    """

    __slots__ = ("seed", "path", "gen")

    def __init__(self, seed: int, path: Iterable[int] = ()) -> None:
        self.seed = int(seed)
        self.path = tuple(int(p) for p in path)
        ss = np.random.SeedSequence((self.seed, *self.path))
        self.gen = np.random.Generator(np.random.PCG64(ss))

    def child(self, *labels: int) -> "RandomSource":
        return RandomSource(self.seed, self.path + labels)

    def integers(self, low: int, high: int, size: Optional[int] = None):
        return self.gen.integers(low, high, size=size)

    def random(self, size: Optional[int] = None):
        return self.gen.random(size=size)


def sample_rate_positions(length: int, rate: float,
                          rng: RandomSource) -> np.ndarray:
    """Positions of [0, length) kept by independent rate-`rate` coin flips.

    Sorted ascending.  rate must lie in (0, 1]; rate == 1 short-circuits to
    every position without consuming randomness, so a saturated sampler stays
    deterministic across rate-formula tweaks.
    """
    if not 0.0 < rate <= 1.0:
        raise ValueError(f"rate must be in (0, 1], got {rate}")
    if length == 0:
        return np.empty(0, dtype=np.int64)
    if rate == 1.0:
        return np.arange(length, dtype=np.int64)
    return np.flatnonzero(rng.random(length) < rate).astype(np.int64)
