"""The oracles themselves, checked against even dumber references."""

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wedit.oracle import (noncrossing_matchings, oracle_bicriteria,
                          oracle_bicriteria_feasible, oracle_bicriteria_subs,
                          oracle_eda, oracle_eda_units, oracle_full_table,
                          oracle_hd, oracle_lce_d, oracle_ov)

_INF = 10**18


def ref_eda_units(x, y, a):
    """Textbook O(nm) scalar DP, the ground truth for the vectorised oracle."""
    n, m = len(x), len(y)
    d = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        d[i][0] = i * a
    for j in range(m + 1):
        d[0][j] = j * a
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            d[i][j] = min(d[i - 1][j] + a,
                          d[i][j - 1] + a,
                          d[i - 1][j - 1] + (0 if x[i - 1] == y[j - 1] else 1))
    return d[n][m]


def ref_bicriteria_subs(x, y, k_i):
    """Scalar layered DP."""
    n, m = len(x), len(y)
    big = _INF
    lay = [[big] * (m + 1) for _ in range(n + 1)]
    lay[0][0] = 0
    for p in range(1, n + 1):
        for q in range(1, m + 1):
            lay[p][q] = lay[p - 1][q - 1] + (0 if x[p - 1] == y[q - 1] else 1)
    for i in range(1, k_i + 1):
        nxt = [[big] * (m + 1) for _ in range(n + 1)]
        for q in range(min(i, m) + 1):
            nxt[0][q] = 0
        for p in range(min(i, n) + 1):
            nxt[p][0] = 0
        for p in range(1, n + 1):
            for q in range(1, m + 1):
                nxt[p][q] = min(
                    nxt[p - 1][q - 1] + (0 if x[p - 1] == y[q - 1] else 1),
                    lay[p - 1][q], lay[p][q - 1])
        lay = nxt
    return lay[n][m]


def test_eda_hand_values():
    # pure substitutions
    assert oracle_eda(b"abc", b"abd", 4) == Fraction(1, 4)
    # one insertion
    assert oracle_eda(b"abc", b"abcd", 4) == 1
    # empty sides
    assert oracle_eda(b"", b"xyz", 2) == 3
    assert oracle_eda(b"xyz", b"", 2) == 3
    assert oracle_eda(b"", b"", 7) == 0
    # substitution vs indel-pair tradeoff: at a=1 a sub costs as much as an
    # indel, at a=3 three subs still beat an indel pair (3/3 < 2)
    assert oracle_eda(b"aaa", b"bbb", 1) == 3
    assert oracle_eda(b"aaa", b"bbb", 3) == 1


def test_eda_prefers_shift_when_subs_expensive():
    # y is x shifted by one; a=1 makes 4 subs (cost 4) worse than indel pair
    # (cost 2); a=8 makes subs cost 4/8 and win
    x, y = b"abcde", b"bcdea"
    assert oracle_eda(x, y, 1) == 2
    assert oracle_eda(x, y, 8) == Fraction(5, 8)


@settings(max_examples=300, deadline=None)
@given(st.binary(max_size=9), st.binary(max_size=9), st.integers(1, 6))
def test_eda_matches_scalar_reference(x, y, a):
    assert oracle_eda_units(x, y, a) == ref_eda_units(x, y, a)


def test_eda_refuses_huge_instances():
    with pytest.raises(ValueError):
        oracle_eda(b"a" * 4000, b"b" * 4000, 2)
    # override works
    assert oracle_eda(b"a" * 4000, b"a" * 4000, 2, max_cells=17_000_000) == 0


def test_bicriteria_hand_values():
    # equal strings: zero subs for any indel budget
    assert oracle_bicriteria_subs(b"abc", b"abc", 0) == 0
    # length mismatch beyond budget is infeasible
    assert oracle_bicriteria_subs(b"abc", b"a", 1) >= _INF
    assert oracle_bicriteria_subs(b"abc", b"a", 2) == 0
    # the indel can dodge a cascade of mismatches
    assert oracle_bicriteria_subs(b"xabcd", b"abcde", 0) == 5
    assert oracle_bicriteria_subs(b"xabcd", b"abcde", 2) == 0
    assert oracle_bicriteria_feasible(b"xabcd", b"abcde", 2, 0)
    assert not oracle_bicriteria_feasible(b"xabcd", b"abcde", 0, 4)


@settings(max_examples=200, deadline=None)
@given(st.binary(max_size=7), st.binary(max_size=7), st.integers(0, 3))
def test_bicriteria_matches_scalar_reference(x, y, k_i):
    assert oracle_bicriteria_subs(x, y, k_i) == ref_bicriteria_subs(x, y, k_i)


@settings(max_examples=200, deadline=None)
@given(st.binary(min_size=1, max_size=8), st.binary(min_size=1, max_size=8))
def test_bicriteria_zero_budget_is_hamming_or_infeasible(x, y):
    got = oracle_bicriteria_subs(x, y, 0)
    if len(x) == len(y):
        assert got == oracle_hd(x, y)
    else:
        assert got >= _INF


def test_lce_d_scans_to_the_d_plus_first_mismatch():
    x = b"aaaaabaaab"
    y = b"aaaaacaaac"
    assert oracle_lce_d(x, y, 0, 0, 0) == 5
    assert oracle_lce_d(x, y, 0, 0, 1) == 9
    assert oracle_lce_d(x, y, 0, 0, 2) == 10
    assert oracle_lce_d(x, y, 6, 6, 0) == 3
    assert oracle_lce_d(x, y, 10, 0, 5) == 0  # empty tail
    # offsets and unequal tails cap the window
    assert oracle_lce_d(b"abab", b"ab", 2, 0, 0) == 2


def test_hd():
    assert oracle_hd(b"abc", b"abd") == 1
    assert oracle_hd(b"", b"") == 0


def test_ov_witness():
    a = [[1, 1], [1, 0]]
    b = [[1, 1], [0, 1]]
    assert oracle_ov(a, b) == (1, 1)
    assert oracle_ov([[1, 1]], [[1, 0]]) is None
    assert oracle_ov([[0]], [[0]]) == (0, 0)  # witness may be falsy-looking


def test_noncrossing_matchings_counts():
    # sum_k C(n,k)*C(m,k) (Vandermonde: C(n+m, n))
    import math
    for n, m in [(0, 0), (1, 2), (2, 2), (3, 2), (3, 3)]:
        got = noncrossing_matchings(n, m)
        assert len(got) == math.comb(n + m, n)
        assert len(set(got)) == len(got)
        for mt in got:
            for (i1, j1), (i2, j2) in itertools.pairwise(mt):
                assert i1 < i2 and j1 < j2


def test_eda_large_random_agrees_with_unit_scaling():
    # distance in units must be invariant to scaling both strings' content
    rng = np.random.Generator(np.random.PCG64(5))
    x = rng.integers(0, 4, 300, dtype=np.uint8)
    y = rng.integers(0, 4, 280, dtype=np.uint8)
    u = oracle_eda_units(x, y, 5)
    assert oracle_eda_units(x + 10, y + 10, 5) == u
    assert oracle_eda(x, y, 5) == Fraction(u, 5)


def test_full_table_recurrence_and_corner():
    rng = np.random.Generator(np.random.PCG64(6))
    for a in (1, 3):
        x = bytes(rng.integers(97, 100, 25).astype(np.uint8))
        y = bytes(rng.integers(97, 100, 30).astype(np.uint8))
        t = oracle_full_table(x, y, a)
        assert t[0, 0] == 0
        assert t[len(x), len(y)] == oracle_eda_units(x, y, a)
        for i in range(1, len(x) + 1):
            for j in range(1, len(y) + 1):
                want = min(t[i - 1, j] + a, t[i, j - 1] + a,
                           t[i - 1, j - 1] + (x[i - 1] != y[j - 1]))
                assert t[i, j] == want


def test_hamming_regime_when_weight_dominates():
    # with a >= |X| = |Y|, indels never pay off and units collapse to HD
    rng = np.random.Generator(np.random.PCG64(7))
    for _ in range(30):
        n = int(rng.integers(1, 40))
        x = bytes(rng.integers(97, 100, n).astype(np.uint8))
        y = bytes(rng.integers(97, 100, n).astype(np.uint8))
        for a in (n, n + 1, 3 * n):
            assert oracle_eda_units(x, y, a) == oracle_hd(x, y)


def test_bicriteria_decision_alias():
    assert oracle_bicriteria(b"abc", b"abd", 0, 1)
    assert not oracle_bicriteria(b"abc", b"abd", 0, 0)
    assert oracle_bicriteria(b"", b"xy", 2, 0)


def test_ov_accepts_instance_objects():
    class Inst:
        u = [[1, 1], [1, 0]]
        v = [[1, 1], [0, 1]]

    assert oracle_ov(Inst()) == (1, 1)
