"""Approximate LCE index: Hamming sampling composed over dyadic ranges.

Three layers, bottom up:

* PeriodicPMIndex answers per-shift mismatch counts for a pair that is
  almost periodic with period p.  Each sampled position classifies a
  mismatch into the X side or the Y side by comparing character
  frequencies over stride-p contexts; positions whose sampled contexts
  are uniform are skipped, and jump tables turn runs of such skips into
  O(1) hops so a query touches few states beyond the violations.

* PMIndex handles a general pair: a gap test per shift keeps candidates
  with HD <= dw and eliminates those with HD > 2dw (eliminated shifts
  answer |X|, which can only overshoot).  One survivor gets its binomial
  sample precomputed directly; two or more certify near-periodicity and
  embed a PeriodicPMIndex with p = the difference of the two smallest.

* ApproxLceIndex picks, for every dyadic range of X long enough to repay
  preprocessing, a PMIndex over that range against a trimmed window of Y,
  and serves all shorter ranges from one shared rate-r naive sampler.
  A query walks maximal dyadic blocks along the diagonal, accumulating
  sampled mismatch counts while the running estimate stays below
  (1 + eps/3)rd, descending into a failing block down to single
  characters before stopping.  Capped-rate builds (rate < 1) read at
  most ~1/eps^2 sampled positions per block and rescale, since more
  reads cannot sharpen a (1 + eps/3) gap decision; full-rate builds
  keep exact in-sample counts.

Randomness is fixed at build time (each component gets its own child
stream); every query is deterministic on the built structure.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from .core import (RandomSource, Text, parse_threshold,
                   sample_rate_positions)
from .sketch import (CappedBinomialSample, NaiveHDSampler, combine_capped,
                     hamming_gap_test)

# Failure of one LCE query is bounded by exp(-eps^2 r d / 27), so this
# rate multiplier drives it below 1/n before the union bound.
RATE_LOG_CONSTANT = 27.0
# Hard step cap multiplier for periodic queries (steps, not probes).
PERIODIC_CAP_MULT = 8.0
# Per-window sample ceiling, in units of 1/eps^2: deciding a (1+eps/3)
# gap cannot use more than Theta(1/eps^2) reads, so capped-rate builds
# stop reading there and scale the count back up (unbiased).  Full-rate
# builds never cap; their exact counts are load-bearing.
WINDOW_SAMPLE_CAP_MULT = 1.5
# Preprocessing probe budget multiplier; overrun degrades to all-|X|.
BUILD_BUDGET_MULT = 4.0

_NO_JUMP = 10**18
_EMPTY64 = np.empty(0, dtype=np.int64)


class _ClassJumps:
    """Sampled positions of one string grouped by residue mod p.

    Each class keeps its positions, their characters, and a pointer from
    every slot to the next slot in the class holding a different
    character, so jump(pos, a) resolves with one binary search.
    """

    __slots__ = ("p", "by_class")

    def __init__(self, positions: np.ndarray, chars: np.ndarray,
                 p: int) -> None:
        self.p = p
        self.by_class: Dict[int, tuple] = {}
        if len(positions) == 0:
            return
        residues = positions % p
        order = np.lexsort((positions, residues))
        pos_s = positions[order]
        ch_s = chars[order]
        res_s = residues[order]
        starts = np.flatnonzero(np.r_[True, res_s[1:] != res_s[:-1]])
        bounds = np.r_[starts, len(res_s)]
        for i in range(len(starts)):
            lo, hi = int(bounds[i]), int(bounds[i + 1])
            cpos = pos_s[lo:hi]
            cch = ch_s[lo:hi]
            k = hi - lo
            nd = np.empty(k, dtype=np.int64)
            nd[k - 1] = k
            for j in range(k - 2, -1, -1):
                nd[j] = j + 1 if cch[j + 1] != cch[j] else nd[j + 1]
            self.by_class[int(res_s[lo])] = (cpos, cch, nd)

    def entry(self, residue: int):
        return self.by_class.get(residue)

    def jump(self, pos: int, char: int) -> int:
        """Smallest sampled position >= pos, same residue class, holding a
        character != char; _NO_JUMP if none exists."""
        e = self.by_class.get(int(pos % self.p))
        if e is None:
            return _NO_JUMP
        cpos, cch, nd = e
        i = int(np.searchsorted(cpos, pos))
        if i == len(cpos):
            return _NO_JUMP
        if cch[i] != char:
            return int(cpos[i])
        j = int(nd[i])
        if j == len(cpos):
            return _NO_JUMP
        return int(cpos[j])


def _find_sampled(pos: np.ndarray, chars: np.ndarray, p: int):
    i = int(np.searchsorted(pos, p))
    if i < len(pos) and pos[i] == p:
        return True, int(chars[i])
    return False, -1


class PeriodicPMIndex:
    """Mismatch sampler for an almost-periodic pair (period p, at most m
    stride-p violations across both strings).

    Queries return a count within total variation delta of
    Binomial(HD(X, Y[s..s+|X|)), r).  All randomness is drawn at build.
    """

    __slots__ = ("x", "y", "p", "m", "rate", "delta", "c_ctx",
                 "sx_pos", "sx_chars", "sy_pos", "sy_chars", "_jx", "_jy")

    def __init__(self, x: Text, y: Text, p: int, m: int, rate: float,
                 delta, rng: RandomSource) -> None:
        if p < 1:
            raise ValueError(f"period must be positive: {p}")
        if m < 0:
            raise ValueError(f"violation budget must be nonnegative: {m}")
        df = float(delta)
        if not 0.0 < df < 1.0:
            raise ValueError(f"delta must be in (0, 1): {delta}")
        self.x = x
        self.y = y
        self.p = p
        self.m = m
        self.rate = rate
        self.delta = delta
        # context survives the filter with probability <= (1-r)^c <= delta^2
        self.c_ctx = max(1, math.ceil(2.0 * math.log(1.0 / df) / rate))
        assert self.c_ctx * rate >= 2.0 * math.log(1.0 / df) - 1e-9
        self.sx_pos = sample_rate_positions(len(x), rate, rng.child(0))
        self.sy_pos = sample_rate_positions(len(y), rate, rng.child(1))
        self.sx_chars = x.read_at(self.sx_pos)
        self.sy_chars = y.read_at(self.sy_pos)
        self._jx = _ClassJumps(self.sx_pos, self.sx_chars, p)
        self._jy = _ClassJumps(self.sy_pos, self.sy_chars, p)

    def _sampled_window(self, jumps: _ClassJumps, pos: int,
                        span: int) -> np.ndarray:
        e = jumps.entry(int(pos % self.p))
        if e is None:
            return _EMPTY64
        cpos, cch, _ = e
        i0 = int(np.searchsorted(cpos, pos))
        i1 = int(np.searchsorted(cpos, pos + span, side="right"))
        return cch[i0:i1]

    def _process_state(self, x: int, y: int, in_sx: bool, sxc: int,
                       in_sy: bool, syc: int) -> Tuple[int, int]:
        """Mismatch test plus frequency classification; returns
        (contribution, elementary step cost)."""
        cx = sxc if in_sx else self.x[x]
        cy = syc if in_sy else self.y[y]
        if cx == cy:
            return 0, 2
        p, c = self.p, self.c_ctx
        ctx_x = np.arange(x, min(len(self.x), x + c * p), p, dtype=np.int64)
        ctx_y = np.arange(y, min(len(self.y), y + c * p), p, dtype=np.int64)
        chx = self.x.read_at(ctx_x)
        chy = self.y.read_at(ctx_y)
        m_x = int((chx == cx).sum() + (chy == cx).sum())
        m_y = int((chx == cy).sum() + (chy == cy).sum())
        hit = (in_sx and m_x <= m_y) or (in_sy and m_y < m_x)
        return (1 if hit else 0), 2 + len(ctx_x) + len(ctx_y)

    def _query_plain(self, s: int) -> int:
        """Literal positional loop; the jump walk must reproduce it bit for
        bit.  Reference implementation, quadratic-ish and test-only."""
        nx = len(self.x)
        span = (self.c_ctx - 1) * self.p
        h = 0
        for x in range(nx):
            y = s + x
            in_sx, sxc = _find_sampled(self.sx_pos, self.sx_chars, x)
            in_sy, syc = _find_sampled(self.sy_pos, self.sy_chars, y)
            if not in_sx and not in_sy:
                continue
            if x + span < nx:
                u = np.concatenate([self._sampled_window(self._jx, x, span),
                                    self._sampled_window(self._jy, y, span)])
                if len(u) > 0 and (u == u[0]).all():
                    continue
            h += self._process_state(x, y, in_sx, sxc, in_sy, syc)[0]
        return h

    def _query_jump(self, s: int, step_cap: Optional[int]) -> Optional[int]:
        """Jump-table walk; returns None when step_cap is exceeded."""
        nx = len(self.x)
        if nx == 0:
            return 0
        p = self.p
        span = (self.c_ctx - 1) * p
        h = 0
        steps = 0
        for rho in range(min(p, nx)):
            ex = self._jx.entry(rho)
            ey = self._jy.entry((rho + s) % p)
            xs = ex[0] if ex is not None else _EMPTY64
            xch = ex[1] if ex is not None else _EMPTY64
            if ey is not None:
                keep = (ey[0] >= s) & (ey[0] < s + nx)
                yxs = ey[0][keep] - s
                ych = ey[1][keep]
            else:
                yxs, ych = _EMPTY64, _EMPTY64
            if len(xs) == 0 and len(yxs) == 0:
                continue
            cursor = rho
            while True:
                ix = int(np.searchsorted(xs, cursor))
                iy = int(np.searchsorted(yxs, cursor))
                nx_cand = int(xs[ix]) if ix < len(xs) else _NO_JUMP
                ny_cand = int(yxs[iy]) if iy < len(yxs) else _NO_JUMP
                x = min(nx_cand, ny_cand)
                if x >= nx:
                    break
                y = s + x
                steps += 1
                if step_cap is not None and steps > step_cap:
                    return None
                in_sx = nx_cand == x
                in_sy = ny_cand == x
                sxc = int(xch[ix]) if in_sx else -1
                syc = int(ych[iy]) if in_sy else -1
                probe_char = sxc if in_sx else syc
                xstar = self._jx.jump(x, probe_char)
                ystar = self._jy.jump(y, probe_char)
                gap = min(nx - x, xstar - x, ystar - y)
                if gap > span:
                    # this state and the next (gap-span)/p states all pass
                    # the uniformity filter; hop over them in one step
                    cursor = x + p * ((gap - span + p - 1) // p)
                    continue
                contrib, cost = self._process_state(x, y, in_sx, sxc,
                                                    in_sy, syc)
                h += contrib
                steps += cost
                if step_cap is not None and steps > step_cap:
                    return None
                cursor = x + p
        return h


def build_periodic_pm(x: Text, y: Text, p: int, m: int, r: float,
                      delta, rng: RandomSource) -> PeriodicPMIndex:
    return PeriodicPMIndex(x, y, p, m, r, delta, rng)


def periodic_pm_query(idx: PeriodicPMIndex, s: int) -> int:
    if not 0 <= s <= len(idx.y) - len(idx.x):
        raise IndexError(f"shift {s} outside [0..{len(idx.y) - len(idx.x)}]")
    res = idx._query_jump(s, None)
    assert res is not None
    return res


def periodic_pm_query_plain(idx: PeriodicPMIndex, s: int) -> int:
    """Reference loop over every position; bit-identical to the jump walk."""
    if not 0 <= s <= len(idx.y) - len(idx.x):
        raise IndexError(f"shift {s} outside [0..{len(idx.y) - len(idx.x)}]")
    return idx._query_plain(s)


class PMIndex:
    """Per-shift mismatch sampler for a general pair, built by shift
    filtering; queries return capped binomial samples with cap d."""

    __slots__ = ("x", "y", "d", "rate", "delta", "slack", "width",
                 "kind", "eliminated", "single_shift", "single_value",
                 "periodic", "step_cap", "build_probes")

    def __init__(self) -> None:
        self.kind = "failed"
        self.eliminated = None
        self.single_shift = -1
        self.single_value = 0
        self.periodic = None


def _counter_total(x: Text, y: Text) -> int:
    cx, cy = x.counter, y.counter
    return cx.count if cx is cy else cx.count + cy.count


def build_pm_index(x: Text, y: Text, d: int, r: float, delta,
                   rng: RandomSource,
                   build_budget: Optional[int] = None) -> PMIndex:
    """Shift-filter classification: LOW shifts survive, HIGH are
    eliminated.  0 survivors answer |X| everywhere; 1 survivor gets a
    direct paired sample; >= 2 embed a PeriodicPMIndex with p the
    difference of the two smallest survivors and violation budget 8dw+w.

    Preprocessing overrunning its probe budget degrades the whole index
    to answering |X| (a failure the caller tolerates, never an error).
    """
    nx, ny = len(x), len(y)
    w = ny - nx + 1
    if nx < 1 or w < 1:
        raise ValueError(f"need 1 <= |X| <= |Y|, got {nx}, {ny}")
    df = float(delta)
    if not df < 1.0 / nx:
        raise ValueError(f"need delta < 1/|X|: {delta} vs 1/{nx}")
    if d * r < 1.0:
        raise ValueError(f"need d >= 1/r: d={d}, r={r}")
    if nx * r < d * w:
        raise ValueError(f"need |X| r >= d w: {nx}*{r} < {d}*{w}")
    idx = PMIndex()
    idx.x, idx.y = x, y
    idx.d = d
    idx.rate = r
    idx.delta = delta
    idx.slack = delta if isinstance(delta, Fraction) else parse_threshold(delta)
    idx.width = w
    nn = nx + ny
    idx.step_cap = max(1, int(PERIODIC_CAP_MULT * d * w
                              * math.log(1.0 / df) ** 2
                              * math.log(max(2, nn))))
    n_gap = math.ceil(6.0 * nx / (d * w) * math.log(w / df))
    if build_budget is None:
        build_budget = math.ceil(BUILD_BUDGET_MULT
                                 * (1 + 2 * w * n_gap + 2 * r * nn))
    start_probes = _counter_total(x, y)

    survivors: List[int] = []
    for s in range(w):
        v = hamming_gap_test(x, y, s, d * w, 2 * d * w, df / w,
                             rng.child(10, s))
        if v.verdict == "LOW":
            survivors.append(s)
    if _counter_total(x, y) - start_probes > build_budget:
        idx.kind = "failed"
        idx.build_probes = _counter_total(x, y) - start_probes
        return idx

    if len(survivors) == 0:
        idx.kind = "eliminated"
    elif len(survivors) == 1:
        st = survivors[0]
        sample = sample_rate_positions(nx, r, rng.child(11))
        value = int((x.read_at(sample) != y.read_at(sample + st)).sum())
        idx.kind = "single"
        idx.single_shift = st
        idx.single_value = value
    else:
        p = survivors[1] - survivors[0]
        m = 8 * d * w + w
        idx.periodic = PeriodicPMIndex(x, y, p, m, r, delta, rng.child(12))
        idx.kind = "periodic"
        elim = np.ones(w, dtype=bool)
        elim[np.asarray(survivors, dtype=np.int64)] = False
        idx.eliminated = elim
    if _counter_total(x, y) - start_probes > build_budget:
        idx.kind = "failed"
        idx.periodic = None
    idx.build_probes = _counter_total(x, y) - start_probes
    return idx


def pm_query(idx: PMIndex, s: int) -> CappedBinomialSample:
    """Deterministic per-shift sample; |X| for eliminated shifts, failed
    builds, and capped-out periodic walks (overshooting is always safe)."""
    if not 0 <= s < idx.width:
        raise IndexError(f"shift {s} outside [0..{idx.width})")
    nx = len(idx.x)
    if idx.kind in ("failed", "eliminated"):
        value = nx
    elif idx.kind == "single":
        value = idx.single_value if s == idx.single_shift else nx
    else:
        if idx.eliminated[s]:
            value = nx
        else:
            got = idx.periodic._query_jump(s, idx.step_cap)
            value = nx if got is None else got
    return CappedBinomialSample(value, idx.d, idx.slack, idx.rate)


class ApproxLceIndex:
    """Dyadic composition answering LCE queries within [LCE_d(x, y),
    LCE_{(1+eps)d}(x, y)] with high probability.

    Components build lazily per (level, start) from their own child
    streams, so the set of queries never changes any answer; samples are
    memoized per (level, start, diagonal).
    """

    __slots__ = ("x", "y", "d", "eps", "w", "rate", "delta", "threshold",
                 "win_cap", "_rng", "_naive", "_components", "_samples")

    def __init__(self, x: Text, y: Text, d: int, eps: float, w: int,
                 rng: RandomSource, rate_cap: Optional[float],
                 failure_exponent: int) -> None:
        if d < 1:
            raise ValueError(f"d must be positive: {d}")
        if not 0.0 < eps < 1.0:
            raise ValueError(f"eps must be in (0, 1): {eps}")
        if w < 1:
            raise ValueError(f"w must be positive: {w}")
        self.x = x
        self.y = y
        self.d = d
        self.eps = eps
        self.w = w
        nn = max(2, len(x) + len(y))
        rate = min(1.0, RATE_LOG_CONSTANT / (eps * eps * d) * math.log(nn))
        if rate_cap is not None:
            if not 0.0 < rate_cap <= 1.0:
                raise ValueError(f"rate_cap must be in (0, 1]: {rate_cap}")
            rate = min(rate, rate_cap)
        self.rate = rate
        self.delta = Fraction(1, nn ** (failure_exponent + 1))
        self.threshold = (1.0 + eps / 3.0) * rate * d
        self.win_cap = None
        if rate < 1.0:
            self.win_cap = max(1, math.ceil(WINDOW_SAMPLE_CAP_MULT
                                            / (eps * eps)))
        self._rng = rng
        self._naive = NaiveHDSampler(x, y, rate, rng.child(0))
        self._components: Dict[tuple, object] = {}
        self._samples: Dict[tuple, CappedBinomialSample] = {}

    def _component(self, level: int, start: int):
        key = (level, start)
        comp = self._components.get(key)
        if comp is None:
            ell = 1 << level
            comp = "naive"
            if ell * self.rate >= self.d * self.w \
                    and self.d * self.rate >= 1.0:
                y0 = max(0, start - self.w)
                y1 = min(len(self.y), start + ell + self.w)
                wprime = (y1 - y0) - ell + 1
                if wprime >= 1 and ell * self.rate >= self.d * wprime \
                        and self.delta < Fraction(1, ell):
                    pm = build_pm_index(self.x.view(start, start + ell),
                                        self.y.view(y0, y1),
                                        self.d, self.rate, self.delta,
                                        self._rng.child(1, level, start))
                    comp = (pm, y0)
            self._components[key] = comp
        return comp

    def _range_sample(self, level: int, start: int,
                      s: int) -> CappedBinomialSample:
        key = (level, start, s)
        got = self._samples.get(key)
        if got is None:
            comp = self._component(level, start)
            ell = 1 << level
            if comp == "naive":
                if self.win_cap is None:
                    v = self._naive.query(start, start + s, ell)
                else:
                    zz = 2 * s if s >= 0 else -2 * s - 1
                    v = self._naive.query_capped(
                        start, start + s, ell, self.win_cap,
                        self._rng.child(2, level, start, zz))
                got = CappedBinomialSample(v, self.d, Fraction(0), self.rate)
            else:
                pm, y0 = comp
                s_pm = start + s - y0
                assert 0 <= s_pm < pm.width, (level, start, s)
                got = pm_query(pm, s_pm)
            self._samples[key] = got
        return got

    def query(self, x: int, y: int,
              trace: Optional[List[tuple]] = None) -> int:
        """Greedy dyadic walk along the diagonal through (x, y)."""
        if abs(x - y) > self.w:
            raise ValueError(f"|x - y| = {abs(x - y)} exceeds w = {self.w}")
        if not (0 <= x <= len(self.x) and 0 <= y <= len(self.y)):
            raise IndexError(f"query ({x}, {y}) out of range")
        e_max = min(len(self.x) - x, len(self.y) - y)
        if self.d >= e_max:
            return e_max  # even an everywhere-mismatch suffix is within d
        s = y - x
        cur = x
        end = x + e_max
        acc: Optional[CappedBinomialSample] = None
        acc_value = 0
        while cur < end:
            align = 60 if cur == 0 else (cur & -cur).bit_length() - 1
            level = min(align, (end - cur).bit_length() - 1)
            while True:
                samp = self._range_sample(level, cur, s)
                if acc_value + samp.value < self.threshold:
                    acc = samp if acc is None else combine_capped(acc, samp)
                    acc_value = acc.value
                    cur += 1 << level
                    if trace is not None:
                        trace.append((cur - x, acc_value))
                    break
                if level == 0:
                    return cur - x  # a single character already overflows
                level -= 1
        return e_max

    def walk(self, x: int, y: int, spent: float, budget: float,
             trace: Optional[List[tuple]] = None) -> Tuple[int, float]:
        """Budgeted variant of query: advance while the accumulated
        sampled mismatch count stays within budget (inclusive), starting
        from an already-spent amount.  Returns (advance, new_spent), so a
        caller can resume the same walk later with a larger budget and
        pay only for windows not yet memoized.  Counts are ints unless a
        capped-rate build rescales overfull windows."""
        if abs(x - y) > self.w:
            raise ValueError(f"|x - y| = {abs(x - y)} exceeds w = {self.w}")
        if not (0 <= x <= len(self.x) and 0 <= y <= len(self.y)):
            raise IndexError(f"walk ({x}, {y}) out of range")
        s = y - x
        cur = x
        end = x + min(len(self.x) - x, len(self.y) - y)
        while cur < end:
            align = 60 if cur == 0 else (cur & -cur).bit_length() - 1
            level = min(align, (end - cur).bit_length() - 1)
            while True:
                samp = self._range_sample(level, cur, s)
                if spent + samp.value <= budget:
                    spent += samp.value
                    cur += 1 << level
                    if trace is not None:
                        trace.append((cur - x, spent))
                    break
                if level == 0:
                    return cur - x, spent
                level -= 1
        return end - x, spent


def build_approx_lce(x: Text, y: Text, d: int, eps: float, w: int,
                     rng: RandomSource, *, rate_cap: Optional[float] = None,
                     failure_exponent: int = 3) -> ApproxLceIndex:
    return ApproxLceIndex(x, y, d, eps, w, rng, rate_cap, failure_exponent)


def approx_lce_query(idx: ApproxLceIndex, x: int, y: int) -> int:
    return idx.query(x, y)
