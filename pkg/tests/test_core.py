"""Primitives: probe counting, cost/threshold types, RNG determinism."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wedit.core import (ByteText, ProbeCounter, RandomSource, ScaledCost,
                        Threshold, cost_add, load_text, parse_threshold,
                        sample_rate_positions, threshold_units)


def test_parse_threshold_forms():
    assert parse_threshold("3/7") == Fraction(3, 7)
    assert parse_threshold("0.25") == Fraction(1, 4)
    assert parse_threshold(" 12 ") == Fraction(12)
    assert parse_threshold(5) == Fraction(5)
    assert parse_threshold(0.1) == Fraction(1, 10)  # decimal, not binary float
    assert parse_threshold(Fraction(9, 2)) == Fraction(9, 2)
    with pytest.raises(ValueError):
        parse_threshold("-1")


def test_threshold_units_floor():
    assert threshold_units(Fraction(1, 2), 4) == 2
    assert threshold_units(Fraction(1, 3), 4) == 1
    assert threshold_units(Fraction(5), 1) == 5
    assert threshold_units(Fraction(7, 2), 3) == 10  # floor(10.5)


def test_threshold_type():
    k = Threshold(Fraction(7, 2), 3)
    assert k.scaled_units == 10
    assert Threshold(Fraction(0), 1).scaled_units == 0
    with pytest.raises(ValueError):
        Threshold(Fraction(-1), 2)
    with pytest.raises(ValueError):
        Threshold(Fraction(1), 0)


def test_scaled_cost_arithmetic():
    a = ScaledCost(3, 2)
    b = ScaledCost(4, 2)
    assert cost_add(a, b) == ScaledCost(7, 2)
    assert cost_add(ScaledCost(0, 5), ScaledCost(0, 5)).units == 0
    # a=2: one indel (2 units) + one substitution (1 unit) = cost 3/2
    assert cost_add(ScaledCost(2, 2), ScaledCost(1, 2)).value == Fraction(3, 2)
    assert a < b and a <= b
    with pytest.raises(ValueError):
        cost_add(ScaledCost(1, 2), ScaledCost(1, 3))
    with pytest.raises(ValueError):
        ScaledCost(-1, 2)


@given(st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 10**6),
       st.integers(1, 50))
def test_cost_add_associative_commutative(u1, u2, u3, a):
    c1, c2, c3 = ScaledCost(u1, a), ScaledCost(u2, a), ScaledCost(u3, a)
    assert cost_add(c1, c2) == cost_add(c2, c1)
    assert cost_add(cost_add(c1, c2), c3) == cost_add(c1, cost_add(c2, c3))


def test_bytetext_counts_reads():
    c = ProbeCounter()
    t = ByteText(b"abcabc", c)
    assert len(t) == 6
    assert t[0] == ord("a")
    assert t[0] == ord("a")  # re-read charges again
    assert c.count == 2
    got = t.read_at(np.array([0, 0, 5]))
    assert list(got) == [ord("a"), ord("a"), ord("c")]
    assert c.count == 5
    # raw view is free by contract (oracle / bulk-build path)
    assert bytes(t.data) == b"abcabc"
    assert c.count == 5


def test_bytetext_view_charges_base_counter():
    c = ProbeCounter()
    t = ByteText(b"0123456789", c)
    v = t.view(3, 7)
    assert len(v) == 4
    assert v[0] == ord("3")
    assert list(v.read_at(np.array([0, 3]))) == [ord("3"), ord("6")]
    assert bytes(v.data) == b"3456"
    assert c.count == 3
    assert v.counter is c


def test_load_text(tmp_path):
    p = tmp_path / "x.bin"
    p.write_bytes(b"abc")
    t = load_text(p)
    assert len(t) == 3 and t[1] == ord("b")
    assert len(load_text(b"")) == 0
    with open(p, "rb") as fh:
        assert bytes(load_text(fh).data) == b"abc"
    with pytest.raises(OSError):
        load_text(tmp_path / "missing.bin")


def test_random_source_is_a_deterministic_tree():
    a = RandomSource(7).child(1, 2)
    b = RandomSource(7, (1,)).child(2)
    assert list(a.integers(0, 100, 8)) == list(b.integers(0, 100, 8))
    # sibling streams differ
    c = RandomSource(7).child(1, 3)
    assert list(RandomSource(7, (1, 2)).integers(0, 100, 8)) != \
        list(c.integers(0, 100, 8))


def test_sample_rate_positions_rate_one_is_everything():
    rng = RandomSource(0)
    assert list(sample_rate_positions(5, 1.0, rng)) == [0, 1, 2, 3, 4]
    assert list(sample_rate_positions(0, 0.5, rng)) == []
    with pytest.raises(ValueError):
        sample_rate_positions(5, 0.0, rng)
    with pytest.raises(ValueError):
        sample_rate_positions(5, 1.5, rng)


def test_sample_rate_positions_mean():
    rng = RandomSource(123)
    n, r = 200_000, 0.01
    got = len(sample_rate_positions(n, r, rng))
    assert abs(got - n * r) < 6 * math.sqrt(n * r)  # six sigma


@given(st.integers(1, 40), st.integers(0, 2**32 - 1))
def test_sample_positions_sorted_unique(n, seed):
    pos = sample_rate_positions(n, 0.5, RandomSource(seed))
    assert list(pos) == sorted(set(int(p) for p in pos))
