"""Gadget constructions against the brute-force referee."""

import itertools
import json
import warnings

import numpy as np
import pytest

from wedit.core import ByteText, RandomSource
from wedit.gadgets import (ALPHABET_BOUND, COORD_X, COORD_Y, INNER_SYMBOLS,
                           OUTER_SYMBOLS, PAD_SYMBOL, GadgetInstance,
                           OVInstance, alignment_gadget, d_plus, d_value,
                           or_composition, ov_reduce, random_ov_instance,
                           read_bundle, vector_gadget_x, vector_gadget_y,
                           write_bundle)
from wedit.oracle import (noncrossing_matchings, oracle_eda_units, oracle_ov)

BIG = 80_000_000


def _u8(s):
    if isinstance(s, np.ndarray):
        return np.ascontiguousarray(s, dtype=np.uint8)
    return np.frombuffer(bytes(s), dtype=np.uint8)


def _du(x, y, a):
    # referee value of the free-X-deletion measure, in units
    xa, ya = _u8(x), _u8(y)
    return oracle_eda_units(xa, ya, a, max_cells=BIG) + (len(ya) - len(xa)) * a


def _dplus_ref(x, y, a):
    xa, ya = _u8(x), _u8(y)
    pad = np.full(len(ya), PAD_SYMBOL, dtype=np.uint8)
    return _du(np.concatenate([pad, xa, pad]), ya, a)


def test_coordinate_values():
    for a in (1, 2, 5):
        one = d_plus(COORD_X[1], COORD_Y[1], a)
        assert one.units == 1 and one.weight_a == a
        for bx, by in ((0, 0), (0, 1), (1, 0)):
            assert d_plus(COORD_X[bx], COORD_Y[by], a).units == 0


def test_d_plus_empty_y_is_zero():
    rng = np.random.Generator(np.random.PCG64(0))
    for _ in range(10):
        x = rng.integers(0, 11, rng.integers(0, 30), dtype=np.uint8)
        assert d_plus(x, b"", 3).units == 0


def test_d_plus_rejects_padding_in_y():
    with pytest.raises(ValueError):
        d_plus(b"\x00\x01", bytes((0, PAD_SYMBOL)), 2)
    # padding in X is allowed, it only adds free-to-delete material
    d_plus(bytes((PAD_SYMBOL,)), b"\x00", 2)


def test_d_measures_match_brute_force():
    rng = np.random.Generator(np.random.PCG64(1))
    for _ in range(40):
        a = int(rng.integers(1, 5))
        x = rng.integers(0, 4, rng.integers(0, 14), dtype=np.uint8)
        y = rng.integers(0, 4, rng.integers(0, 14), dtype=np.uint8)
        assert d_value(x, y, a).units == _du(x, y, a)
        assert d_plus(x, y, a).units == _dplus_ref(x, y, a)


def test_padding_is_any_disjoint_context():
    # wrapping X in arbitrary long-enough strings over a disjoint alphabet
    # gives the same value as the canonical padding
    rng = np.random.Generator(np.random.PCG64(2))
    for _ in range(40):
        a = int(rng.integers(1, 5))
        x = rng.integers(0, 4, rng.integers(0, 10), dtype=np.uint8)
        y = rng.integers(0, 4, rng.integers(1, 10), dtype=np.uint8)
        left = rng.integers(8, 11, len(y) + rng.integers(0, 6),
                            dtype=np.uint8)
        right = rng.integers(8, 11, len(y) + rng.integers(0, 6),
                             dtype=np.uint8)
        framed = np.concatenate([left, x, right])
        assert _du(framed, y, a) == d_plus(x, y, a).units


def test_alignment_gadget_single_pair_readback():
    x, y, c_units = alignment_gadget([bytes((0, 1))], [bytes((1,))], 2)
    assert bytes(x.data) == bytes((2, 2, 0, 1, 2, 3))
    assert bytes(y.data) == bytes((3, 2, 1, 3, 3))
    assert c_units == 2


def test_alignment_gadget_shapes():
    rng = np.random.Generator(np.random.PCG64(3))
    for _ in range(15):
        n = int(rng.integers(1, 5))
        m = int(rng.integers(1, n + 1))
        lx, ly = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        xs = [rng.integers(0, 2, lx, dtype=np.uint8) for _ in range(n)]
        ys = [rng.integers(0, 2, ly, dtype=np.uint8) for _ in range(m)]
        x, y, c_units = alignment_gadget(xs, ys, 2)
        assert len(x) == n * (lx + 4 * ly)
        assert len(y) == (2 * n + 3 * m) * ly
        assert c_units == (n + m) * ly


def test_alignment_gadget_contract():
    with pytest.raises(ValueError):
        alignment_gadget([b"\x00"], [b"\x01", b"\x00"], 2)   # m > n
    with pytest.raises(ValueError):
        alignment_gadget([b"\x00", b"\x00\x01"], [b"\x01"], 2)
    with pytest.raises(ValueError):
        alignment_gadget([b"\x02"], [b"\x01"], 2)            # symbol >= sigma
    with pytest.raises(ValueError):
        alignment_gadget([b"\x00"], [], 2)


def _alignment_grid():
    rng = np.random.Generator(np.random.PCG64(4))
    for n in (1, 2, 3):
        for m in range(1, min(n, 2) + 1):
            for lx in (1, 2, 3):
                for ly in (1, 2, 3):
                    for a in (1, 2, 3, 4):
                        xs = [bytes(rng.integers(0, 2, lx, dtype=np.uint8))
                              for _ in range(n)]
                        ys = [bytes(rng.integers(0, 2, ly, dtype=np.uint8))
                              for _ in range(m)]
                        yield n, m, a, xs, ys


def test_alignment_upper_bound_every_shift():
    for n, m, a, xs, ys in _alignment_grid():
        x, y, c_units = alignment_gadget(xs, ys, 2)
        val = _dplus_ref(x.data, y.data, a)
        for delta in range(n - m + 1):
            bound = c_units + sum(
                d_plus(xs[j + delta], ys[j], a).units for j in range(m))
            assert val <= bound


def test_alignment_lower_bound_some_noncrossing_matching():
    for n, m, a, xs, ys in _alignment_grid():
        x, y, c_units = alignment_gadget(xs, ys, 2)
        val = _dplus_ref(x.data, y.data, a)
        plus = {(i, j): d_plus(xs[i], ys[j], a).units
                for i in range(n) for j in range(m)}
        top = max(_du(xs[i], ys[j], a)
                  for i in range(n) for j in range(m))
        best = min(c_units + sum(plus[e] for e in match)
                   + (m - len(match)) * top
                   for match in noncrossing_matchings(n, m))
        assert val >= best


def test_or_composition_single_pair_readback():
    x, y = or_composition([(b"\x00", b"\x01")], 1)
    # derived symbols just above the inputs: A=2, B=3, C=4, D unused
    assert bytes(x.data) == bytes((2, 3, 3, 0, 4, 4, 2))
    assert bytes(y.data) == bytes((1,))


def test_or_composition_shapes():
    rng = np.random.Generator(np.random.PCG64(5))
    for _ in range(15):
        n = int(rng.integers(1, 5))
        lx, ly = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        prs = [(rng.integers(0, 2, lx, dtype=np.uint8),
                rng.integers(0, 2, ly, dtype=np.uint8)) for _ in range(n)]
        ell = lx + ly
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            x, y = or_composition(prs, n)
        assert len(x) == ly + n * (2 * ell + lx + ly)
        assert len(y) == n * ly + (n - 1) * (2 * ell + lx)


def test_or_composition_exact_minimum_on_grid():
    rng = np.random.Generator(np.random.PCG64(6))
    for n in (1, 2, 3):
        for lx in (1, 2, 3):
            for ly in (1, 2, 3):
                for a in (n, n + 1, n + 2):
                    prs = [(bytes(rng.integers(0, 2, lx, dtype=np.uint8)),
                            bytes(rng.integers(0, 2, ly, dtype=np.uint8)))
                           for _ in range(n)]
                    x, y = or_composition(prs, a)
                    want = (n - 1) * (lx + ly) + min(
                        d_plus(px, py, a).units for px, py in prs)
                    assert _du(x.data, y.data, a) == want


def test_or_composition_warns_below_pair_count():
    prs = [(b"\x00", b"\x01")] * 3
    with pytest.warns(RuntimeWarning):
        or_composition(prs, 2)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        or_composition(prs, 3)


def test_or_composition_contract():
    with pytest.raises(ValueError):
        or_composition([], 2)
    with pytest.raises(ValueError):
        or_composition([(b"\x00", b"\x01"), (b"\x00\x00", b"\x01")], 2)
    with pytest.raises(ValueError):
        or_composition([(b"\x00", b"\x05")], 2, symbols=(5, 6, 7, 8))
    with pytest.raises(ValueError):
        or_composition([(b"\x00", b"\x01")], 2, symbols=(2, 2, 3, 4))
    with pytest.raises(ValueError):
        or_composition([(b"\x00", b"\x01")], 0)


def test_vector_gadget_pair_values():
    # orthogonal pairs hit the 2d floor exactly, everything else sits at
    # least one unit above and at most the inner product above
    for d in (1, 2, 3):
        for a in (4, 8):
            for u in itertools.product((0, 1), repeat=d):
                for v in itertools.product((0, 1), repeat=d):
                    val = d_plus(vector_gadget_x(u), vector_gadget_y(v),
                                 a).units
                    ip = sum(cu * cv for cu, cv in zip(u, v))
                    if ip == 0:
                        assert val == 2 * d
                    else:
                        assert 2 * d + 1 <= val <= 2 * d + ip


def test_vector_gadget_shapes_and_contract():
    assert len(vector_gadget_x((0, 1, 1))) == 18
    assert len(vector_gadget_y((0, 1, 1))) == 15
    with pytest.raises(ValueError):
        vector_gadget_x(())
    with pytest.raises(ValueError):
        vector_gadget_y((0, 2))


def test_nested_composition_keeps_the_minimum():
    # two-level nesting: the block value is insensitive to padding, and
    # the outer minimum matches the global pair minimum
    rng = np.random.Generator(np.random.PCG64(7))
    a = 4
    vecs = [tuple(rng.integers(0, 2, 2)) for _ in range(8)]
    prs = [(vector_gadget_x(vecs[2 * i]), vector_gadget_y(vecs[2 * i + 1]))
           for i in range(4)]
    blocks = [or_composition(prs[:2], a, symbols=INNER_SYMBOLS),
              or_composition(prs[2:], a, symbols=INNER_SYMBOLS)]
    ell = len(prs[0][0]) + len(prs[0][1])
    for (bx, by), sub in zip(blocks, (prs[:2], prs[2:])):
        want = ell + min(d_plus(px, py, a).units for px, py in sub)
        assert _du(bx.data, by.data, a) == want
        assert _dplus_ref(bx.data, by.data, a) == want
    x, y = or_composition([(bx.data, by.data) for bx, by in blocks], a,
                          symbols=OUTER_SYMBOLS)
    ell_out = len(blocks[0][0]) + len(blocks[0][1])
    want = ell_out + ell + min(d_plus(px, py, a).units for px, py in prs)
    assert _du(x.data, y.data, a) == want


def test_ov_reduce_known_yes_and_no():
    yes = OVInstance(np.array([[1, 0], [0, 1]]), np.array([[1, 0], [0, 1]]))
    no = OVInstance(np.array([[1, 1], [1, 1]]), np.array([[1, 1], [1, 1]]))
    for a in (4, 8):
        for m in (1, 2):
            g = ov_reduce(yes, a, m)
            units = oracle_eda_units(g.x.data, g.y.data, a, max_cells=BIG)
            assert units == g.threshold_units
            g = ov_reduce(no, a, m)
            units = oracle_eda_units(g.x.data, g.y.data, a, max_cells=BIG)
            assert units > g.threshold_units


def test_ov_reduce_iff_random_sample():
    root = RandomSource(20)
    for trial in range(20):
        rng = root.child(trial)
        n = int(rng.integers(1, 4))
        d = int(rng.integers(1, 4))
        inst = random_ov_instance(n, d, rng.child(0))
        a = (4, 8)[trial % 2]
        for m in {1, n}:
            g = ov_reduce(inst, a, m)
            units = oracle_eda_units(g.x.data, g.y.data, a, max_cells=BIG)
            if oracle_ov(inst) is not None:
                assert units == g.threshold_units
            else:
                assert units > g.threshold_units


def test_ov_reduce_threshold_depends_only_on_shape():
    root = RandomSource(21)
    first = ov_reduce(random_ov_instance(3, 3, root.child(0)), 4, 1)
    second = ov_reduce(random_ov_instance(3, 3, root.child(1)), 4, 1)
    assert first.threshold_units == second.threshold_units
    assert len(first.x) == len(second.x)
    assert len(first.y) == len(second.y)


def test_ov_reduce_alphabet_and_provenance():
    inst = random_ov_instance(3, 3, RandomSource(22))
    g = ov_reduce(inst, 4, 1)            # 9 pairs > a: two levels
    assert int(g.x.data.max()) < ALPHABET_BOUND
    assert int(g.y.data.max()) < ALPHABET_BOUND
    assert g.provenance["levels"] == 2
    assert g.provenance["rows"] * g.provenance["cols"] >= 9
    small = ov_reduce(random_ov_instance(2, 2, RandomSource(23)), 4, 1)
    assert small.provenance["levels"] == 1
    assert small.provenance["construction"] == "ov-reduce-v1"


def test_ov_reduce_contract():
    inst = random_ov_instance(2, 2, RandomSource(24))
    with pytest.raises(ValueError):
        ov_reduce(inst, 4, 0)
    with pytest.raises(ValueError):
        ov_reduce(inst, 4, 3)
    with pytest.raises(ValueError):
        ov_reduce(inst, 0, 1)


def test_ov_instance_validation_and_referee_duck_typing():
    with pytest.raises(ValueError):
        OVInstance(np.array([[0, 2]]), np.array([[0, 1]]))
    with pytest.raises(ValueError):
        OVInstance(np.array([[0, 1]]), np.array([[0, 1], [1, 0]]))
    inst = OVInstance(np.array([[1, 1], [1, 0]]),
                      np.array([[1, 1], [0, 1]]))
    assert inst.n == 2 and inst.d == 2
    assert oracle_ov(inst) == (1, 1)


def test_bundle_roundtrip(tmp_path):
    inst = random_ov_instance(2, 3, RandomSource(25))
    g = ov_reduce(inst, 4, 2)
    out = write_bundle(g, tmp_path / "bundle", seed=77)
    meta = json.loads((out / "meta.json").read_text())
    assert meta["construction"] == "ov-reduce-v1"
    assert meta["seed"] == 77
    assert meta["alphabet_max"] <= ALPHABET_BOUND
    assert meta["ell_x"] == 18 and meta["ell_y"] == 15
    back = read_bundle(out)
    assert bytes(back.x.data) == bytes(g.x.data)
    assert bytes(back.y.data) == bytes(g.y.data)
    assert back.threshold_units == g.threshold_units
    assert back.weight_a == g.weight_a
    ov = back.provenance["ov"]
    assert np.array_equal(ov.u, inst.u) and np.array_equal(ov.v, inst.v)
