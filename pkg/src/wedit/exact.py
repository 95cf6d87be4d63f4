"""Exact bounded ED_a and exact (k_I, k_S)-alignment decision.

Two exact routes to ED_a under a threshold k: a banded DP over the
diagonals |x-y| <= k, and a wave sweep over cost levels v in
{0, 1/a, ..., floor(ak)/a} that spends one LCE query per (level, diagonal).
Both return the exact cost when <= k and EXCEEDS otherwise; eda_exact picks
the route with the smaller predicted work.

Costs are integer units of 1/a throughout (indel = a units, substitution
= 1 unit).  Wave entries D_t[s] hold the furthest x such that X[0..x) and
Y[0..x+s) align within t units; undefined entries read as -infinity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

import numpy as np

from .core import INF, ScaledCost, Text, Threshold
from .lce import LceIndex

NEG = -INF


class Exceeds:
    """Sentinel result: the distance is larger than the threshold."""

    _instance: Optional["Exceeds"] = None

    def __new__(cls) -> "Exceeds":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "EXCEEDS"


EXCEEDS = Exceeds()

EdaResult = Union[ScaledCost, Exceeds]


def _as_threshold(k, a: int) -> Threshold:
    if isinstance(k, Threshold):
        if k.weight_a != a:
            raise ValueError(f"threshold weight {k.weight_a} != a = {a}")
        return k
    return Threshold(k, a)


class WaveTable:
    """Full (cost level, diagonal) -> furthest-row mapping from a wave run.

    waves[t] covers diagonals s in [-(t//a) .. t//a], slot s + t//a.
    found_units is the first level whose target diagonal reached |X|,
    or None when the run exhausted the grid (EXCEEDS).
    """

    __slots__ = ("xlen", "ylen", "weight_a", "waves", "found_units")

    def __init__(self, xlen: int, ylen: int, weight_a: int,
                 waves: List[Optional[np.ndarray]],
                 found_units: Optional[int]) -> None:
        self.xlen = xlen
        self.ylen = ylen
        self.weight_a = weight_a
        self.waves = waves
        self.found_units = found_units

    def lookup(self, t: int, s: int) -> int:
        if t < 0 or t >= len(self.waves):
            return NEG
        w = self.waves[t]
        if w is None:
            return NEG
        v = t // self.weight_a
        if abs(s) > v:
            return NEG
        return int(w[s + v])


class BiWaveTable:
    """(v_I, v_S, diagonal) -> furthest-row mapping from a bicriteria run."""

    __slots__ = ("xlen", "ylen", "k_indels", "k_subs", "tables", "found")

    def __init__(self, xlen: int, ylen: int, k_indels: int, k_subs: int,
                 tables: dict, found: Optional[Tuple[int, int]]) -> None:
        self.xlen = xlen
        self.ylen = ylen
        self.k_indels = k_indels
        self.k_subs = k_subs
        self.tables = tables
        self.found = found  # (v_I, v_S) of the first YES, or None

    def lookup(self, v_i: int, v_s: int, s: int) -> int:
        if v_i < 0 or v_s < 0 or abs(s) > v_i:
            return NEG
        w = self.tables.get((v_i, v_s))
        if w is None:
            return NEG
        return int(w[s + v_i])


def eda_waves(x: Text, y: Text, a: int, k,
              keep_table: bool = False):
    """Wave algorithm: level t holds the furthest rows reachable in t units.

    Level transitions try insert (level t-a, diagonal s-1), substitute
    (t-1, s, advancing one row) and delete (t-a, s+1, advancing one row),
    clamp into the valid rectangle, then extend along the diagonal with one
    exact LCE query per slot.  First level whose target diagonal reaches
    |X| is the distance.
    """
    thr = _as_threshold(k, a)
    n, m = len(x), len(y)
    s_tgt = m - n
    if abs(n - m) > thr.value:  # every unpaired character costs a full unit
        return (EXCEEDS, WaveTable(n, m, a, [], None)) if keep_table else EXCEEDS
    lce = LceIndex(x, y)  # charges n + m probes, the only reads
    top = min(thr.scaled_units, (n + m) * a)  # ED_a is at most |X| + |Y|
    waves: List[Optional[np.ndarray]] = []
    for t in range(top + 1):
        v = t // a
        width = 2 * v + 1
        svals = np.arange(-v, v + 1, dtype=np.int64)
        arm = np.full(width, NEG, dtype=np.int64)
        if t >= a:
            p = waves[t - a]
            arm[2:] = p                      # insert: consumes Y, shift up
            np.maximum(arm[:width - 2], p + 1, out=arm[:width - 2])  # delete
        if t >= 1:
            q = waves[t - 1]
            if t % a == 0:
                np.maximum(arm[1:width - 1], q + 1, out=arm[1:width - 1])
            else:
                np.maximum(arm, q + 1, out=arm)  # substitute: same diagonal
        dprime = np.minimum(np.minimum(n, m - svals), arm)
        if dprime[v] < 0:
            dprime[v] = 0  # empty prefixes align for free
        d = dprime.copy()
        ok = (dprime >= 0) & (dprime + svals >= 0)
        if ok.any():
            d[ok] += lce.query_many(dprime[ok], (dprime + svals)[ok])
        if t >= 1 and waves[t - 1] is not None:
            q = waves[t - 1]
            overlap = d[1:width - 1] if t % a == 0 else d
            assert (overlap >= q).all(), "wave values must grow with the level"
        waves.append(d)
        if abs(s_tgt) <= v and d[s_tgt + v] == n:
            cost = ScaledCost(t, a)
            return (cost, WaveTable(n, m, a, waves, t)) if keep_table else cost
        if not keep_table and t - a >= 0:
            waves[t - a] = None  # only levels t-1 .. t-a feed the next level
    return (EXCEEDS, WaveTable(n, m, a, waves, None)) if keep_table else EXCEEDS


def eda_banded(x: Text, y: Text, a: int, k) -> EdaResult:
    """Banded DP: classic row recurrence restricted to |x - y| <= floor(k).

    Reads each input character exactly once up front; the band never holds
    an optimal alignment's cell outside it because each unit of diagonal
    drift costs a full indel.
    """
    thr = _as_threshold(k, a)
    n, m = len(x), len(y)
    if abs(n - m) > thr.value:
        return EXCEEDS  # band empty, no characters read
    bw = min(int(thr.value), max(n, m))
    width = 2 * bw + 1
    xbuf = x.read_at(np.arange(n, dtype=np.int64))
    ybuf = y.read_at(np.arange(m, dtype=np.int64))
    offs = np.arange(width, dtype=np.int64) - bw  # slot j <-> y = x + offs[j]
    ja = np.arange(width, dtype=np.int64) * a
    yr0 = offs.copy()
    prev = np.full(width, INF, dtype=np.int64)
    v0 = (yr0 >= 0) & (yr0 <= m)
    prev[v0] = yr0[v0] * a
    for xi in range(1, n + 1):
        yrow = xi + offs
        valid = (yrow >= 0) & (yrow <= m)
        cand = np.full(width, INF, dtype=np.int64)
        ok = valid & (yrow >= 1)
        if ok.any():
            eq = ybuf[yrow[ok] - 1] == xbuf[xi - 1]
            cand[ok] = prev[ok] + np.where(eq, 0, 1)
        cand[:width - 1] = np.minimum(cand[:width - 1], prev[1:] + a)
        cand[~valid] = INF
        row = np.minimum.accumulate(cand - ja) + ja  # inserts within the row
        row[~valid] = INF
        prev = row
    units = int(prev[m - n + bw])
    if units <= thr.scaled_units:
        return ScaledCost(units, a)
    return EXCEEDS


def eda_exact(x: Text, y: Text, a: int, k) -> EdaResult:
    """Bounded ED_a by the cheaper route: waves when a*k < n, else banded."""
    thr = _as_threshold(k, a)
    n = max(len(x), len(y))
    if a * thr.value < n:
        return eda_waves(x, y, a, thr)
    return eda_banded(x, y, a, thr)


def bicriteria_exact(x: Text, y: Text, k_indels: int, k_subs: int,
                     keep_table: bool = False):
    """Is there an alignment with at most k_indels indels and k_subs subs?

    Wave table per budget pair: D[v_I, v_S][s] is the furthest row on
    diagonal s reachable within v_I indels and v_S substitutions.  Budgets
    sweep v_S outer, v_I inner; first pair whose target diagonal reaches
    |X| answers YES.
    """
    if k_indels < 0 or k_subs < 0:
        raise ValueError("budgets must be nonnegative")
    n, m = len(x), len(y)
    s_tgt = m - n
    if abs(s_tgt) > k_indels:  # shifts only come from indels
        return (False, BiWaveTable(n, m, k_indels, k_subs, {}, None)) \
            if keep_table else False
    lce = LceIndex(x, y)
    tables: dict = {}
    found: Optional[Tuple[int, int]] = None
    for v_s in range(k_subs + 1):
        for v_i in range(k_indels + 1):
            width = 2 * v_i + 1
            svals = np.arange(-v_i, v_i + 1, dtype=np.int64)
            arm = np.full(width, NEG, dtype=np.int64)
            if v_i >= 1:
                p = tables[(v_i - 1, v_s)]
                arm[2:] = p
                np.maximum(arm[:width - 2], p + 1, out=arm[:width - 2])
            if v_s >= 1:
                q = tables[(v_i, v_s - 1)]
                np.maximum(arm, q + 1, out=arm)
            dprime = np.minimum(np.minimum(n, m - svals), arm)
            if dprime[v_i] < 0:
                dprime[v_i] = 0
            d = dprime.copy()
            ok = (dprime >= 0) & (dprime + svals >= 0)
            if ok.any():
                d[ok] += lce.query_many(dprime[ok], (dprime + svals)[ok])
            if v_s >= 1:
                assert (d >= tables[(v_i, v_s - 1)]).all(), \
                    "values must grow with the substitution budget"
            tables[(v_i, v_s)] = d
            if found is None and abs(s_tgt) <= v_i and d[s_tgt + v_i] == n:
                found = (v_i, v_s)
                if not keep_table:
                    return True
        # keep_table runs fill the whole grid so the walk has every level
    if keep_table:
        return (found is not None,
                BiWaveTable(n, m, k_indels, k_subs, tables, found))
    return found is not None


@dataclass
class EditScript:
    """Ordered alignment operations transforming X into Y.

    Ops are ("match", x0, y0, length), ("sub", x, y), ("del", x), ("ins", y)
    with positions in the respective strings.
    """

    ops: List[tuple] = field(default_factory=list)

    @property
    def indels(self) -> int:
        return sum(1 for op in self.ops if op[0] in ("del", "ins"))

    @property
    def subs(self) -> int:
        return sum(1 for op in self.ops if op[0] == "sub")

    def units(self, a: int) -> int:
        return a * self.indels + self.subs

    def replay(self, x, y) -> bytes:
        """Verify the script walks X and Y gaplessly; returns the rebuilt Y.

        Raises ValueError on any inconsistency: out-of-order positions,
        a MATCH run over differing characters, a SUBSTITUTE of equal ones.
        """
        xb = bytes(x.data) if hasattr(x, "data") else bytes(x)
        yb = bytes(y.data) if hasattr(y, "data") else bytes(y)
        out = bytearray()
        xi = yi = 0
        for op in self.ops:
            kind = op[0]
            if kind == "match":
                _, x0, y0, run = op
                if x0 != xi or y0 != yi or run <= 0:
                    raise ValueError(f"bad match op at ({xi},{yi}): {op}")
                if xb[x0:x0 + run] != yb[y0:y0 + run]:
                    raise ValueError(f"match run differs: {op}")
                out += xb[x0:x0 + run]
                xi += run
                yi += run
            elif kind == "sub":
                _, xp, yp = op
                if xp != xi or yp != yi:
                    raise ValueError(f"bad sub op at ({xi},{yi}): {op}")
                if xb[xp] == yb[yp]:
                    raise ValueError(f"substitution of equal characters: {op}")
                out.append(yb[yp])
                xi += 1
                yi += 1
            elif kind == "del":
                if op[1] != xi:
                    raise ValueError(f"bad del op at ({xi},{yi}): {op}")
                xi += 1
            elif kind == "ins":
                if op[1] != yi:
                    raise ValueError(f"bad ins op at ({xi},{yi}): {op}")
                out.append(yb[op[1]])
                yi += 1
            else:
                raise ValueError(f"unknown op: {op}")
        if xi != len(xb) or yi != len(yb):
            raise ValueError("script does not cover both strings")
        if bytes(out) != yb:
            raise ValueError("replay does not produce Y")
        return bytes(out)


def _compress(raw: List[tuple]) -> List[tuple]:
    ops: List[tuple] = []
    for op in raw:
        if op[0] == "match" and ops and ops[-1][0] == "match" \
                and ops[-1][1] + ops[-1][3] == op[1]:
            ops[-1] = ("match", ops[-1][1], ops[-1][2], ops[-1][3] + 1)
        elif op[0] == "match":
            ops.append(("match", op[1], op[2], 1))
        else:
            ops.append(op)
    return ops


def reconstruct_alignment(table, x: Text, y: Text) -> EditScript:
    """Walk a YES table back to an explicit, replay-checked edit script.

    Equal trailing characters are always matched (safe: a substitution
    never beats a match, and an indel pair costs 2a > 1); otherwise any
    predecessor level that certifies the remaining prefix is taken.
    """
    if isinstance(table, WaveTable):
        if table.found_units is None:
            raise ValueError("table records EXCEEDS; nothing to reconstruct")
        return _walk_waves(table, x, y)
    if isinstance(table, BiWaveTable):
        if table.found is None:
            raise ValueError("table records NO; nothing to reconstruct")
        return _walk_bicriteria(table, x, y)
    raise TypeError(f"not a wave table: {type(table).__name__}")


def _walk_waves(table: WaveTable, x: Text, y: Text) -> EditScript:
    n, m, a = table.xlen, table.ylen, table.weight_a
    t = table.found_units
    xi, yi = n, m
    raw: List[tuple] = []
    while xi > 0 or yi > 0:
        if xi > 0 and yi > 0 and x[xi - 1] == y[yi - 1]:
            raw.append(("match", xi - 1, yi - 1))
            xi -= 1
            yi -= 1
            continue
        s = yi - xi
        if xi > 0 and yi > 0 and table.lookup(t - 1, s) >= xi - 1:
            raw.append(("sub", xi - 1, yi - 1))
            xi -= 1
            yi -= 1
            t -= 1
        elif xi > 0 and table.lookup(t - a, s + 1) >= xi - 1:
            raw.append(("del", xi - 1))
            xi -= 1
            t -= a
        elif yi > 0 and table.lookup(t - a, s - 1) >= xi:
            raw.append(("ins", yi - 1))
            yi -= 1
            t -= a
        else:
            raise RuntimeError("wave table admits no predecessor; "
                               "reconstruction invariant broken")
    raw.reverse()
    return EditScript(_compress(raw))


def _walk_bicriteria(table: BiWaveTable, x: Text, y: Text) -> EditScript:
    n, m = table.xlen, table.ylen
    v_i, v_s = table.found
    xi, yi = n, m
    raw: List[tuple] = []
    while xi > 0 or yi > 0:
        if xi > 0 and yi > 0 and x[xi - 1] == y[yi - 1]:
            raw.append(("match", xi - 1, yi - 1))
            xi -= 1
            yi -= 1
            continue
        s = yi - xi
        if xi > 0 and yi > 0 and table.lookup(v_i, v_s - 1, s) >= xi - 1:
            raw.append(("sub", xi - 1, yi - 1))
            xi -= 1
            yi -= 1
            v_s -= 1
        elif xi > 0 and table.lookup(v_i - 1, v_s, s + 1) >= xi - 1:
            raw.append(("del", xi - 1))
            xi -= 1
            v_i -= 1
        elif yi > 0 and table.lookup(v_i - 1, v_s, s - 1) >= xi:
            raw.append(("ins", yi - 1))
            yi -= 1
            v_i -= 1
        else:
            raise RuntimeError("bicriteria table admits no predecessor; "
                               "reconstruction invariant broken")
    raw.reverse()
    return EditScript(_compress(raw))
