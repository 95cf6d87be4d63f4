"""Brute-force reference implementations.

Everything here is deliberately independent of the fast paths: no imports
from the other modules, no shared helpers, plain quadratic (or worse)
dynamic programs.  The test suite trusts these and checks the real
algorithms against them.

Cost model: indels cost 1, substitutions cost 1/a; internally integer
multiples of 1/a (indel = a units, substitution = 1 unit).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

_INF = 10**18

Bytesish = Union[bytes, bytearray, np.ndarray]


def _as_u8(x: Bytesish) -> np.ndarray:
    if isinstance(x, np.ndarray):
        return np.ascontiguousarray(x, dtype=np.uint8)
    if hasattr(x, "data") and isinstance(getattr(x, "data"), np.ndarray):
        return x.data  # probe-counted text objects expose a raw view
    return np.frombuffer(bytes(x), dtype=np.uint8)


def oracle_eda_units(x: Bytesish, y: Bytesish, a: int,
                     max_cells: int = 10_000_000) -> int:
    """Full quadratic DP for the weighted edit distance, in 1/a units.

    Row-vectorised: the in-row insertion arm cur[j] = min(base[j],
    cur[j-1] + a) unrolls to min_{t<=j} base[t] + a*(j-t), a prefix minimum
    of base[t] - a*t.  Exact in int64.

    Refuses instances above max_cells cells (override consciously).
    """
    assert a >= 1
    xa, ya = _as_u8(x), _as_u8(y)
    n, m = len(xa), len(ya)
    if (n + 1) * (m + 1) > max_cells:
        raise ValueError(f"{(n+1)*(m+1)} cells exceeds max_cells={max_cells}")
    cols = np.arange(m + 1, dtype=np.int64)
    prev = cols * a
    base = np.empty(m + 1, dtype=np.int64)
    for i in range(1, n + 1):
        sub = (ya != xa[i - 1]).astype(np.int64)
        base[0] = i * a
        np.minimum(prev[1:] + a, prev[:-1] + sub, out=base[1:])
        prev = np.minimum.accumulate(base - cols * a) + cols * a
    return int(prev[m])


def oracle_eda(x: Bytesish, y: Bytesish, a: int,
               max_cells: int = 10_000_000) -> Fraction:
    """Exact weighted edit distance as a Fraction."""
    return Fraction(oracle_eda_units(x, y, a, max_cells=max_cells), a)


def oracle_full_table(x: Bytesish, y: Bytesish, a: int,
                      max_cells: int = 10_000_000) -> np.ndarray:
    """Every prefix-pair cost: grid[i, j] = distance of x[:i] vs y[:j] in
    1/a units.  Deliberately plain scalar loops; referee only."""
    assert a >= 1
    xa, ya = _as_u8(x), _as_u8(y)
    n, m = len(xa), len(ya)
    if (n + 1) * (m + 1) > max_cells:
        raise ValueError(f"{(n+1)*(m+1)} cells exceeds max_cells={max_cells}")
    t = np.empty((n + 1, m + 1), dtype=np.int64)
    t[0, :] = np.arange(m + 1) * a
    t[:, 0] = np.arange(n + 1) * a
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            t[i, j] = min(t[i - 1, j] + a, t[i, j - 1] + a,
                          t[i - 1, j - 1] + (1 if xa[i - 1] != ya[j - 1] else 0))
    return t


def oracle_bicriteria_subs(x: Bytesish, y: Bytesish, k_indels: int,
                           max_cells: int = 50_000_000) -> int:
    """Minimum substitutions over alignments using at most k_indels indels.

    Returns a large sentinel (compares greater than any real count) when no
    such alignment exists, i.e. when abs(len(x) - len(y)) > k_indels.

    Layered DP, S_i = table for "at most i indels":
      S_i[p][q] = min(S_i[p-1][q-1] + [x!=y], S_{i-1}[p-1][q], S_{i-1}[p][q-1])
    with S_i[p][0] = 0 for p <= i (free deletions budgeted as indels), and
    symmetrically for row 0.  No in-row dependency, so rows vectorise.
    """
    assert k_indels >= 0
    xa, ya = _as_u8(x), _as_u8(y)
    n, m = len(xa), len(ya)
    if (n + 1) * (m + 1) * (k_indels + 1) > max_cells:
        raise ValueError("instance exceeds max_cells")
    sub = (xa[:, None] != ya[None, :]).astype(np.int64)
    layer = np.full((n + 1, m + 1), _INF, dtype=np.int64)
    layer[0, 0] = 0
    for p in range(1, n + 1):
        layer[p, 1:] = layer[p - 1, :-1] + sub[p - 1]
    for i in range(1, k_indels + 1):
        nxt = np.full((n + 1, m + 1), _INF, dtype=np.int64)
        nxt[0, :min(i, m) + 1] = 0
        nxt[:min(i, n) + 1, 0] = 0
        for p in range(1, n + 1):
            np.minimum(layer[p - 1, 1:], layer[p, :-1], out=nxt[p, 1:])
            np.minimum(nxt[p, 1:], nxt[p - 1, :-1] + sub[p - 1], out=nxt[p, 1:])
        layer = nxt
    return int(layer[n, m])


def oracle_bicriteria_feasible(x: Bytesish, y: Bytesish,
                               k_indels: int, k_subs: int) -> bool:
    """True iff some alignment uses <= k_indels indels and <= k_subs subs."""
    return oracle_bicriteria_subs(x, y, k_indels) <= k_subs


def oracle_bicriteria(x: Bytesish, y: Bytesish,
                      k_indels: int, k_subs: int) -> bool:
    """Alias of oracle_bicriteria_feasible under the decision-problem name."""
    return oracle_bicriteria_feasible(x, y, k_indels, k_subs)


def oracle_lce_d(x: Bytesish, y: Bytesish, x0: int, y0: int, d: int) -> int:
    """Longest common extension with at most d mismatches.

    Largest ell such that x[x0:x0+ell] and y[y0:y0+ell] differ in at most d
    positions (both slices must exist; ell is capped by the shorter tail).
    """
    xa, ya = _as_u8(x), _as_u8(y)
    w = min(len(xa) - x0, len(ya) - y0)
    if w <= 0:
        return 0
    neq = xa[x0:x0 + w] != ya[y0:y0 + w]
    cum = np.cumsum(neq)
    over = np.nonzero(cum > d)[0]
    return int(over[0]) if len(over) else w


def oracle_hd(x: Bytesish, y: Bytesish) -> int:
    """Hamming distance of equal-length strings."""
    xa, ya = _as_u8(x), _as_u8(y)
    assert len(xa) == len(ya)
    return int(np.count_nonzero(xa != ya))


def oracle_ov(a_vecs, b_vecs=None) -> Optional[Tuple[int, int]]:
    """First orthogonal pair (i, j) with <a_vecs[i], b_vecs[j]> = 0, else None.

    Accepts either two vector collections or a single instance object
    exposing .u and .v.  Note: returns None for "no pair", and a tuple
    otherwise; (0, 0) is a valid witness, so test with `is not None`,
    not truthiness.
    """
    if b_vecs is None:
        a_vecs, b_vecs = a_vecs.u, a_vecs.v
    A = np.asarray(a_vecs, dtype=np.int64)
    B = np.asarray(b_vecs, dtype=np.int64)
    assert A.ndim == 2 and B.ndim == 2 and A.shape[1] == B.shape[1]
    hits = np.argwhere(A @ B.T == 0)
    if len(hits) == 0:
        return None
    i, j = hits[0]
    return int(i), int(j)


def noncrossing_matchings(n: int, m: int) -> List[Tuple[Tuple[int, int], ...]]:
    """All noncrossing partial matchings between [0..n) and [0..m).

    Each matching is a tuple of (i, j) pairs, strictly increasing in both
    coordinates; the empty matching is included.  Exponential, for small
    identity checks only.
    """
    out: List[Tuple[Tuple[int, int], ...]] = []
    acc: List[Tuple[int, int]] = []

    def rec(i0: int, j0: int) -> None:
        out.append(tuple(acc))
        for i in range(i0, n):
            for j in range(j0, m):
                acc.append((i, j))
                rec(i + 1, j + 1)
                acc.pop()

    rec(0, 0)
    return out
