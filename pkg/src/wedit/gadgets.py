"""Hardness-instance generators: string gadgets whose weighted distance
encodes an orthogonal-vectors search.

The building block is a pair of auxiliary measures.  d_value(X, Y) is the
weighted distance re-charged so that deletions in X are free: a character
of Y costs 0 when matched, 1/a when substituted, 2 when inserted.  d_plus
is d_value with X wrapped in |Y| padding symbols on each side; by a
context-insensitivity fact (tested against the referee), any sufficiently
long disjoint-alphabet context gives the same value, which makes d_plus
values compose across concatenations.

Two combiners are provided.  alignment_gadget interleaves n X-strings and
m Y-strings (n >= m) with two fresh separator symbols; the combined
d_plus value is sandwiched between shifted sums of component values and
sums over noncrossing component pairings, with an explicit constant
C_units.  or_composition chains n (X_i, Y_i) pairs with three separators
plus a Y-only filler symbol; for a >= n its combined distance is exactly
a fixed offset plus the MINIMUM component d_plus value, i.e. an exact OR
over the components.

ov_reduce stacks these: each 0/1 coordinate becomes a two-or-one letter
value string, each vector becomes an alignment gadget over its coordinate
strings (an orthogonal pair of vectors floors at exactly 2d units, any
other pair sits at least one unit higher), and an or_composition over all
cross pairs of vectors turns "some pair is orthogonal" into "the distance
hits its floor".  When the pair count exceeds a, one nesting level splits
the pairs into blocks so each composition stays within its a >= count
guarantee.  The threshold is assembled from the composition offsets plus
the floor value of a reference pair that is orthogonal by construction,
evaluated with the brute-force referee.  Instances are decided by
"ED_a(X, Y) <= threshold iff some u in U, v in V are orthogonal"; YES
lands exactly on the threshold and NO at least one unit above it.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .core import ByteText, ScaledCost
from .exact import eda_exact
from .oracle import oracle_eda_units

PAD_SYMBOL = 11

# Value strings for single 0/1 coordinates.  Indexed by bit: the X side
# encodes 0 as (0, 1) and 1 as (0, 0); the Y side encodes the bit itself.
# Both-ones is the only combination with a nonzero d_plus value (1 unit).
COORD_X = (bytes((0, 1)), bytes((0, 0)))
COORD_Y = (bytes((0,)), bytes((1,)))

# Separator assignments, fixed so instances are byte-reproducible.
# Vector gadgets use A=2, B=3 over the coordinate alphabet {0, 1}.  The
# first composition level uses (A, B, C, D) = INNER_SYMBOLS, the second
# OUTER_SYMBOLS; the outer C doubles as the d_plus padding symbol 11,
# which is safe because d_plus is never applied to outer-level strings.
INNER_SYMBOLS = (4, 5, 6, 7)
OUTER_SYMBOLS = (8, 9, 11, 10)
ALPHABET_BOUND = 12

Byteish = Union[bytes, bytearray, np.ndarray, "ByteText"]


def _as_u8(s: Byteish) -> np.ndarray:
    if isinstance(s, np.ndarray):
        return np.ascontiguousarray(s, dtype=np.uint8)
    if hasattr(s, "data") and isinstance(getattr(s, "data"), np.ndarray):
        return s.data
    return np.frombuffer(bytes(s), dtype=np.uint8)


def d_value(x: Byteish, y: Byteish, a: int) -> ScaledCost:
    """Weighted distance with free X-deletions, in 1/a units.

    d_value(X, Y) = ED_a(X, Y) + |Y| - |X|.  Computed with the exact
    solver at a threshold large enough to never truncate.
    """
    xa, ya = _as_u8(x), _as_u8(y)
    bound = Fraction(max(len(xa), len(ya)))
    res = eda_exact(ByteText(xa), ByteText(ya), a, bound)
    assert isinstance(res, ScaledCost)
    return ScaledCost(res.units + (len(ya) - len(xa)) * a, a)


def d_plus(x: Byteish, y: Byteish, a: int) -> ScaledCost:
    """d_value of X wrapped in |Y| padding symbols on each side.

    The padding symbol is 11 and must not occur in Y (X may contain it;
    only Y-side collisions would let padding match for free).
    """
    xa, ya = _as_u8(x), _as_u8(y)
    if np.any(ya == PAD_SYMBOL):
        raise ValueError(f"padding symbol {PAD_SYMBOL} occurs in Y")
    pad = np.full(len(ya), PAD_SYMBOL, dtype=np.uint8)
    return d_value(np.concatenate([pad, xa, pad]), ya, a)


def _ga_x_side(xs: List[np.ndarray], sigma_y: int, ell_y: int) -> np.ndarray:
    a_sym = np.full(ell_y, sigma_y, dtype=np.uint8)
    b_sym = np.full(ell_y, sigma_y + 1, dtype=np.uint8)
    parts: List[np.ndarray] = []
    for xi in xs:
        parts += [a_sym, a_sym, xi, a_sym, b_sym]
    return np.concatenate(parts)


def _ga_y_side(ys: List[np.ndarray], sigma_y: int, n: int) -> np.ndarray:
    ell_y = len(ys[0])
    a_sym = np.full(ell_y, sigma_y, dtype=np.uint8)
    b_sym = np.full(ell_y, sigma_y + 1, dtype=np.uint8)
    guard = np.full(n * ell_y, sigma_y + 1, dtype=np.uint8)
    parts: List[np.ndarray] = [guard]
    for yj in ys:
        parts += [a_sym, yj, b_sym]
    parts.append(guard)
    return np.concatenate(parts)


def alignment_gadget(xs: Sequence[Byteish], ys: Sequence[Byteish],
                     sigma_y: int) -> Tuple[ByteText, ByteText, int]:
    """Interleave n X-strings and m Y-strings with fresh separators.

    With A = sigma_y, B = sigma_y + 1, and ell = ell_Y, the X side is the
    concatenation of A^2ell X_i A^ell B^ell phrases and the Y side is
    B^(n ell) followed by A^ell Y_j B^ell phrases and another B^(n ell).
    Returns (X, Y, C_units) with C_units = (n + m) * ell: the combined
    d_plus value tracks component sums up to C_units / a.

    Requires n >= m >= 1, one common positive length per side, and every
    input symbol below sigma_y so both separators are fresh.
    """
    xa = [_as_u8(s) for s in xs]
    ya = [_as_u8(s) for s in ys]
    n, m = len(xa), len(ya)
    if not n >= m >= 1:
        raise ValueError(f"need n >= m >= 1 components, got n={n}, m={m}")
    ell_x, ell_y = len(xa[0]), len(ya[0])
    if ell_x < 1 or any(len(s) != ell_x for s in xa):
        raise ValueError("X components must share one positive length")
    if ell_y < 1 or any(len(s) != ell_y for s in ya):
        raise ValueError("Y components must share one positive length")
    top = max(int(s.max()) for s in xa + ya)
    if top >= sigma_y:
        raise ValueError(
            f"input symbol {top} not below sigma_y = {sigma_y}")
    if sigma_y + 1 > 255:
        raise ValueError("separator symbols exceed the byte range")
    x = _ga_x_side(xa, sigma_y, ell_y)
    y = _ga_y_side(ya, sigma_y, n)
    return ByteText(x), ByteText(y), (n + m) * ell_y


def or_composition(pairs: Sequence[Tuple[Byteish, Byteish]], a: int,
                   symbols: Optional[Tuple[int, int, int, int]] = None,
                   ) -> Tuple[ByteText, ByteText]:
    """Chain n (X_i, Y_i) pairs so the distance takes the minimum branch.

    With separators (A, B, C, D) and ell = ell_X + ell_Y, the X side is
    A^ell_Y followed by B^ell X_j C^ell A^ell_Y phrases; the Y side is
    Y_1 followed by B^ell D^ell_X C^ell Y_j phrases.  For a >= n the
    combined value satisfies, exactly,

        d_value(X, Y) = (n - 1) * ell / a  +  min_i d_plus(X_i, Y_i).

    For a < n the strings are still emitted but the equality is void; a
    RuntimeWarning says so.  `symbols` defaults to the four values just
    above the inputs' alphabet; all four must be absent from the inputs.
    """
    if a < 1:
        raise ValueError(f"a must be >= 1, got {a}")
    if not pairs:
        raise ValueError("need at least one pair")
    xa = [_as_u8(p[0]) for p in pairs]
    ya = [_as_u8(p[1]) for p in pairs]
    ell_x, ell_y = len(xa[0]), len(ya[0])
    if ell_x < 1 or any(len(s) != ell_x for s in xa):
        raise ValueError("X components must share one positive length")
    if ell_y < 1 or any(len(s) != ell_y for s in ya):
        raise ValueError("Y components must share one positive length")
    seen = np.zeros(256, dtype=bool)
    for s in xa + ya:
        seen[s] = True
    if symbols is None:
        base = int(np.flatnonzero(seen).max()) + 1
        symbols = (base, base + 1, base + 2, base + 3)
    sym_a, sym_b, sym_c, sym_d = (int(s) for s in symbols)
    if len({sym_a, sym_b, sym_c, sym_d}) != 4 or max(symbols) > 255:
        raise ValueError(f"need four distinct byte symbols, got {symbols}")
    if any(seen[s] for s in symbols):
        raise ValueError(f"separator symbols {symbols} occur in the inputs")
    if a < len(pairs):
        warnings.warn(
            f"a = {a} is below the pair count {len(pairs)}: the minimum-"
            "branch equality is not guaranteed", RuntimeWarning,
            stacklevel=2)
    ell = ell_x + ell_y
    blk_a = np.full(ell_y, sym_a, dtype=np.uint8)
    blk_b = np.full(ell, sym_b, dtype=np.uint8)
    blk_c = np.full(ell, sym_c, dtype=np.uint8)
    blk_d = np.full(ell_x, sym_d, dtype=np.uint8)
    xparts: List[np.ndarray] = [blk_a]
    for xi in xa:
        xparts += [blk_b, xi, blk_c, blk_a]
    yparts: List[np.ndarray] = [ya[0]]
    for yj in ya[1:]:
        yparts += [blk_b, blk_d, blk_c, yj]
    return ByteText(np.concatenate(xparts)), ByteText(np.concatenate(yparts))


def _as_bits(vec: Sequence[int]) -> List[int]:
    bits = [int(b) for b in vec]
    if not bits or any(b not in (0, 1) for b in bits):
        raise ValueError("vectors must be nonempty with 0/1 coordinates")
    return bits


def vector_gadget_x(u: Sequence[int]) -> bytes:
    """X-side string for one 0/1 vector: alignment phrases over its
    coordinate value strings, separators A=2, B=3.  Length 6d."""
    bits = _as_bits(u)
    xs = [np.frombuffer(COORD_X[b], dtype=np.uint8) for b in bits]
    return bytes(_ga_x_side(xs, 2, 1))


def vector_gadget_y(v: Sequence[int]) -> bytes:
    """Y-side counterpart of vector_gadget_x.  Length 5d."""
    bits = _as_bits(v)
    ys = [np.frombuffer(COORD_Y[b], dtype=np.uint8) for b in bits]
    return bytes(_ga_y_side(ys, 2, len(bits)))


@dataclass(frozen=True)
class OVInstance:
    """Two equal-size sets of 0/1 vectors; asks for an orthogonal pair."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self) -> None:
        u = np.ascontiguousarray(self.u, dtype=np.uint8)
        v = np.ascontiguousarray(self.v, dtype=np.uint8)
        if u.ndim != 2 or v.ndim != 2 or u.shape != v.shape:
            raise ValueError(
                f"need matching (n, d) vector arrays, got {u.shape} "
                f"and {v.shape}")
        if u.shape[0] < 1 or u.shape[1] < 1:
            raise ValueError("need at least one vector and one coordinate")
        if u.max() > 1 or v.max() > 1:
            raise ValueError("coordinates must be 0 or 1")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def n(self) -> int:
        return int(self.u.shape[0])

    @property
    def d(self) -> int:
        return int(self.u.shape[1])


def random_ov_instance(n: int, d: int, rng) -> OVInstance:
    """Uniform random instance; `rng` is a RandomSource."""
    u = rng.integers(0, 2, size=n * d).reshape(n, d)
    v = rng.integers(0, 2, size=n * d).reshape(n, d)
    return OVInstance(u, v)


@dataclass(frozen=True)
class GadgetInstance:
    """A decided hardness instance: ED_a(x, y) <= threshold iff the
    provenance OV instance has an orthogonal pair."""

    x: ByteText
    y: ByteText
    threshold_units: int
    weight_a: int
    provenance: Dict[str, object]

    def __post_init__(self) -> None:
        if self.threshold_units < 0:
            raise ValueError("threshold must be nonnegative")
        if self.weight_a < 1:
            raise ValueError("weight must be >= 1")


def _orthogonal_floor_units(d: int, a: int) -> int:
    """Reference d_plus value of one orthogonal vector pair, in units.

    Evaluated by the brute-force referee on the all-zeros pair, which is
    orthogonal by construction; every orthogonal pair of the same
    dimension takes this exact value (2d when the combiner bounds hold).
    """
    zx = np.frombuffer(vector_gadget_x([0] * d), dtype=np.uint8)
    zy = np.frombuffer(vector_gadget_y([0] * d), dtype=np.uint8)
    pad = np.full(len(zy), PAD_SYMBOL, dtype=np.uint8)
    padded = np.concatenate([pad, zx, pad])
    units = oracle_eda_units(padded, zy, a)
    return units + (len(zy) - len(padded)) * a


def _cover_indices(n: int, m: int) -> List[List[int]]:
    size = -(-n // m)
    return [[min(i * size + t, n - 1) for t in range(size)]
            for i in range(m)]


def ov_reduce(inst: OVInstance, a: int, m: int) -> GadgetInstance:
    """Build a threshold instance deciding the OV search.

    U and V are covered by m blocks of ceil(n/m) vectors (the tail block
    repeats the last vector).  All vector pairs are listed block by block
    and fed to an or_composition; when the pair count exceeds a, the
    pairs are split into ceil(sqrt(count)) blocks composed at a first
    level and the blocks are composed at a second level, keeping each
    level's count within a on the small grids this targets.  The
    threshold adds the composition offsets to the referee-derived floor
    of an orthogonal reference pair, then converts from the free-deletion
    measure to plain ED_a via the length difference.
    """
    if a < 1:
        raise ValueError(f"a must be >= 1, got {a}")
    if not 1 <= m <= inst.n:
        raise ValueError(f"block parameter m={m} outside [1, {inst.n}]")
    d = inst.d
    gx = [vector_gadget_x(row) for row in inst.u]
    gy = [vector_gadget_y(row) for row in inst.v]
    cover = _cover_indices(inst.n, m)
    pairs: List[Tuple[bytes, bytes]] = []
    for ub in cover:
        for vb in cover:
            for i in ub:
                for j in vb:
                    pairs.append((gx[i], gy[j]))
    ell_x, ell_y = 6 * d, 5 * d
    ell = ell_x + ell_y
    floor_units = _orthogonal_floor_units(d, a)
    count = len(pairs)
    if count <= a:
        x, y = or_composition(pairs, a, symbols=INNER_SYMBOLS)
        levels, rows, cols = 1, 1, count
        d_threshold = (count - 1) * ell + floor_units
    else:
        rows = math.isqrt(count - 1) + 1
        cols = -(-count // rows)
        padded = pairs + [pairs[0]] * (rows * cols - count)
        blocks = [or_composition(padded[r * cols:(r + 1) * cols], a,
                                 symbols=INNER_SYMBOLS)
                  for r in range(rows)]
        ell_out = len(blocks[0][0]) + len(blocks[0][1])
        x, y = or_composition([(bx.data, by.data) for bx, by in blocks], a,
                              symbols=OUTER_SYMBOLS)
        levels = 2
        d_threshold = (rows - 1) * ell_out + (cols - 1) * ell + floor_units
    assert max(int(x.data.max()), int(y.data.max())) < ALPHABET_BOUND
    threshold_units = d_threshold + (len(x) - len(y)) * a
    provenance: Dict[str, object] = {
        "ov": inst, "n": inst.n, "m": m, "d": d,
        "ell_x": ell_x, "ell_y": ell_y,
        "levels": levels, "rows": rows, "cols": cols,
        "construction": "ov-reduce-v1",
    }
    return GadgetInstance(x, y, threshold_units, a, provenance)


def write_bundle(inst: GadgetInstance, out_dir,
                 seed: Optional[int] = None) -> Path:
    """Write x.bin, y.bin and meta.json into out_dir (created if needed)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "x.bin").write_bytes(bytes(inst.x.data))
    (out / "y.bin").write_bytes(bytes(inst.y.data))
    prov = inst.provenance
    ov = prov.get("ov")
    meta = {
        "construction": prov.get("construction", "ov-reduce-v1"),
        "a": inst.weight_a,
        "threshold_units": inst.threshold_units,
        "n": prov["n"], "m": prov["m"], "d": prov["d"],
        "ell_x": prov["ell_x"], "ell_y": prov["ell_y"],
        "seed": seed,
        "alphabet_max": int(max(inst.x.data.max(), inst.y.data.max())) + 1,
        "u": ov.u.tolist() if ov is not None else None,
        "v": ov.v.tolist() if ov is not None else None,
    }
    (out / "meta.json").write_text(
        json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return out


def read_bundle(path) -> GadgetInstance:
    """Read a bundle written by write_bundle."""
    src = Path(path)
    meta = json.loads((src / "meta.json").read_text())
    x = ByteText((src / "x.bin").read_bytes())
    y = ByteText((src / "y.bin").read_bytes())
    provenance: Dict[str, object] = {
        key: meta[key] for key in
        ("n", "m", "d", "ell_x", "ell_y", "construction", "seed")
        if key in meta}
    if meta.get("u") is not None:
        provenance["ov"] = OVInstance(np.asarray(meta["u"]),
                                      np.asarray(meta["v"]))
    return GadgetInstance(x, y, meta["threshold_units"], meta["a"],
                          provenance)
