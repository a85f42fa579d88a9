"""Maximal k-mismatch rectangular palindromes (per-center Pareto frontiers).

A rectangle at center ``(cr, cc)`` is a stack of row pairs: row pair
``dv`` joins rows ``(cr - dv) / 2`` and ``(cr + dv) / 2``, and a mismatch
in it sits at column distance ``dh = |2j - cc|`` from the center.  The
mismatch belongs to every rectangle with width ``w > dh`` and height
``h > dv``.

Row pairs are enumerated inside out with character kangaroo jumps (the 1D
k-mismatch palindrome step).  Growing the height at a fixed width ``w``
is an LCE query on columns of level ``floor(log2 w)`` names: the row
segment is covered by a prefix name and a suffix name, so the first row
pair whose names disagree is found with two queries.

The improved search keeps the sorted column distances of the mismatches
inside the current block.  When a row pair would push the count past
``k`` the block is reported, and the width shrinks just enough to drop
the ``(k + 1)``-th innermost mismatch among the block plus that row pair.

On random grids the improved search stays within ``8 * (k + outputs) + 16``
queries per center.  That is not a worst-case guarantee: a blocking row
pair is re-enumerated with budget ``k + 1``, so grids whose rows keep
mismatches just outside the current width pay up to ``O(k)`` per output.
"""
from __future__ import annotations

import numpy as np
from numba import njit

from .grid import Grid, RectResults
from .lce import LceTables, build_tables, kangaroo_flat, lce_query
from .naming import NameSet, build_names, char_pos, char_text, rect_pos, rect_text

# documented query bound: A * (k + outputs at the center) + B
QUERY_BOUND_A = 8
QUERY_BOUND_B = 16


class RectIndex:
    """Row names for levels ``0 .. floor(log2 m)`` laid out as columns, and
    character-level LCE over rows."""

    def __init__(self, grid: Grid, names: NameSet | None, columns: LceTables | None,
                 chars: LceTables):
        self.grid = grid
        self.names = names
        self.columns = columns
        self.chars = chars

    @classmethod
    def build(cls, grid: Grid) -> "RectIndex":
        n, m = grid.n, grid.m
        text, _ = char_text(grid)
        chars = build_tables([text], max(n, m) + 1)
        names = build_names(grid, axes="rows")
        texts = [rect_text(names, lev)[0] for lev in range(names.max_row_level + 1)]
        # one level at a time keeps a single set of construction buffers alive
        first = build_tables(texts[:1], n + 1)
        full = [np.empty((len(texts),) + a.shape[1:], a.dtype) for a in first[:5]]
        for lev in range(len(texts)):
            one = first if lev == 0 else build_tables(texts[lev:lev + 1], n + 1)
            texts[lev] = None
            for a, f in zip(one[:5], full):
                f[lev] = a[0]
        return cls(grid, names, LceTables(*full, first.lg), chars)

    @property
    def name_entries(self) -> int:
        return self.names.entry_count


@njit(cache=True)
def _ilog2(x):
    r = 0
    while x > 1:
        x >>= 1
        r += 1
    return r


@njit(cache=True)
def _row_mismatches(chars, n, m, cr, cc, dv, w, cap, out, offs):
    """Sorted column distances of the first ``cap`` mismatches of row pair ``dv``
    within width ``w``.  Returns (count, queries)."""
    u = (cr - dv) // 2
    b = (cr + dv) // 2
    right_end = (cc + w - 1) // 2
    left_end = (cc - w + 1) // 2
    jr0 = (cc + 1) // 2 if dv > 0 else cc // 2 + 1
    queries = 0
    nr = 0
    count = right_end - jr0 + 1
    if count > 0:
        _, nr, q = kangaroo_flat(chars, 0, char_pos(n, m, 0, u, jr0),
                                 char_pos(n, m, 1, b, cc - jr0), count, cap - 1, offs[0])
        queries += q
    nl = 0
    jl0 = jr0 - 1
    count = jl0 - left_end + 1
    if dv > 0 and count > 0:
        _, nl, q = kangaroo_flat(chars, 0, char_pos(n, m, 1, u, jl0),
                                 char_pos(n, m, 0, b, cc - jl0), count, cap - 1, offs[1])
        queries += q
    x = 0
    y = 0
    total = 0
    while total < cap and (x < nr or y < nl):
        dr = 2 * (jr0 + offs[0, x]) - cc if x < nr else 1 << 62
        dl = cc - 2 * (jl0 - offs[1, y]) if y < nl else 1 << 62
        if dr <= dl:
            out[total] = dr
            x += 1
        else:
            out[total] = dl
            y += 1
        total += 1
    return total, queries


@njit(cache=True)
def _extend(columns, n, m, cr, cc, w, dv, dv_max):
    """First row pair ``>= dv`` whose width-``w`` segments differ (``> dv_max`` if none)."""
    lev = _ilog2(w)
    span = 1 << lev
    left = (cc - w + 1) // 2
    right = (cc + w - 1) // 2
    u = (cr - dv) // 2
    b = (cr + dv) // 2
    run = (dv_max - dv) // 2 + 1
    a = lce_query(columns, lev, rect_pos(n, m, 0, left, u), rect_pos(n, m, 1, right, b))
    if a < run:
        run = a
    a = lce_query(columns, lev, rect_pos(n, m, 0, right - span + 1, u),
                  rect_pos(n, m, 1, left + span - 1, b))
    if a < run:
        run = a
    return dv + 2 * run


@njit(cache=True)
def _merge_sorted(a, na, b, nb, cap, out):
    x = 0
    y = 0
    total = 0
    while total < cap and (x < na or y < nb):
        if y >= nb or (x < na and a[x] <= b[y]):
            out[total] = a[x]
            x += 1
        else:
            out[total] = b[y]
            y += 1
        total += 1
    return total


@njit(cache=True)
def _push(out, cnt, cr, cc, w, h, c):
    if cnt == out.shape[0]:
        bigger = np.empty((2 * out.shape[0], 5), np.int64)
        bigger[:cnt] = out
        out = bigger
    out[cnt, 0] = cr
    out[cnt, 1] = cc
    out[cnt, 2] = w
    out[cnt, 3] = h
    out[cnt, 4] = c
    return out


@njit(cache=True)
def _rect_improved_kernel(t, k, columns, chars):
    n, m = t.shape
    out = np.empty((1024, 5), np.int64)
    cnt = 0
    qs = np.empty(((2 * n - 1) * (2 * m - 1), 3), np.int64)
    live = np.empty(k + 1, np.int64)
    row = np.empty(k + 1, np.int64)
    merged = np.empty(k + 1, np.int64)
    offs = np.empty((2, k + 2), np.int64)
    idx = 0
    for cr in range(2 * n - 1):
        for cc in range(2 * m - 1):
            pr = cr & 1
            pc = cc & 1
            dv_max = min(cr, 2 * n - 2 - cr)
            w_max = min(cc, 2 * m - 2 - cc) + 1
            w_min = 1 + pc
            nlive, queries = _row_mismatches(chars, n, m, cr, cc, pr, w_max, k + 1, live, offs)
            w = w_max
            if nlive > k:
                d = live[k]
                w = d - 1
                nlive = 0
                while nlive < k and live[nlive] < d:
                    nlive += 1
            dv = pr
            while w >= w_min:
                nxt = dv + 2
                if nxt <= dv_max:
                    nxt = _extend(columns, n, m, cr, cc, w, nxt, dv_max)
                    queries += 2
                if nxt > dv_max:
                    out = _push(out, cnt, cr, cc, w, dv_max + 1, nlive)
                    cnt += 1
                    break
                rem = k - nlive
                c, q = _row_mismatches(chars, n, m, cr, cc, nxt, w, rem + 1, row, offs)
                queries += q
                if c <= rem:
                    total = _merge_sorted(live, nlive, row, c, k + 1, merged)
                    live[:total] = merged[:total]
                    nlive = total
                    dv = nxt
                    continue
                out = _push(out, cnt, cr, cc, w, nxt - 1, nlive)
                cnt += 1
                if rem + 1 < k + 1:
                    c, q = _row_mismatches(chars, n, m, cr, cc, nxt, w, k + 1, row, offs)
                    queries += q
                total = _merge_sorted(live, nlive, row, c, k + 1, merged)
                d = merged[k]
                w = d - 1
                nlive = 0
                while nlive < k and merged[nlive] < d:
                    live[nlive] = merged[nlive]
                    nlive += 1
                dv = nxt
            qs[idx, 0] = cr
            qs[idx, 1] = cc
            qs[idx, 2] = queries
            idx += 1
    return out[:cnt], qs


@njit(cache=True)
def _rect_baseline_kernel(t, k, columns, chars):
    n, m = t.shape
    out = np.empty((1024, 5), np.int64)
    cnt = 0
    qs = np.empty(((2 * n - 1) * (2 * m - 1), 3), np.int64)
    row = np.empty(k + 1, np.int64)
    offs = np.empty((2, k + 2), np.int64)
    heights = np.empty(m + 1, np.int64)
    used = np.empty(m + 1, np.int64)
    idx = 0
    for cr in range(2 * n - 1):
        for cc in range(2 * m - 1):
            pr = cr & 1
            pc = cc & 1
            dv_max = min(cr, 2 * n - 2 - cr)
            w_max = min(cc, 2 * m - 2 - cc) + 1
            queries = 0
            nw = 0
            for w in range(1 + pc, w_max + 1, 2):
                c, q = _row_mismatches(chars, n, m, cr, cc, pr, w, k + 1, row, offs)
                queries += q
                if c > k:
                    break
                dv = pr
                h = dv_max + 1
                while True:
                    nxt = dv + 2
                    if nxt <= dv_max:
                        nxt = _extend(columns, n, m, cr, cc, w, nxt, dv_max)
                        queries += 2
                    if nxt > dv_max:
                        break
                    c2, q = _row_mismatches(chars, n, m, cr, cc, nxt, w, k - c + 1, row, offs)
                    queries += q
                    if c + c2 > k:
                        h = nxt - 1
                        break
                    c += c2
                    dv = nxt
                heights[nw] = h
                used[nw] = c
                nw += 1
            for a in range(nw - 1, -1, -1):
                if a == nw - 1 or heights[a] > heights[a + 1]:
                    out = _push(out, cnt, cr, cc, 1 + pc + 2 * a, heights[a], used[a])
                    cnt += 1
            qs[idx, 0] = cr
            qs[idx, 1] = cc
            qs[idx, 2] = queries
            idx += 1
    return out[:cnt], qs


def _results(rec, qs):
    return RectResults(rec[:, 0], rec[:, 1], rec[:, 2], rec[:, 3], rec[:, 4], qs)


def rect_improved(g: Grid, k: int, index: RectIndex | None = None) -> RectResults:
    """Width-shrinking frontier walk; one pass of vertical extensions per center."""
    if k < 0:
        raise ValueError("k must be non-negative")
    index = index or RectIndex.build(g)
    return _results(*_rect_improved_kernel(g.cells, k, tuple(index.columns), tuple(index.chars)))


def rect_baseline(g: Grid, k: int, index: RectIndex | None = None) -> RectResults:
    """Maximal height for every admissible width, then a dominance filter."""
    if k < 0:
        raise ValueError("k must be non-negative")
    index = index or RectIndex.build(g)
    return _results(*_rect_baseline_kernel(g.cells, k, tuple(index.columns), tuple(index.chars)))


def extend_vertical(index: RectIndex, center, w: int, k: int, height: int = 0):
    """Grow a block of width ``w`` and height ``height`` (0 = empty, the core
    row pair still unchecked) while at most ``k`` mismatching pairs are inside.

    Returns ``(height, mismatches, blocking)``; ``blocking`` holds the sorted
    column distances of the first mismatches of the row pair that stopped
    growth, and is empty when the grid boundary stopped it.
    """
    cr, cc = center
    n, m = index.grid.n, index.grid.m
    if not (0 <= cr <= 2 * n - 2 and 0 <= cc <= 2 * m - 2):
        raise ValueError("center outside the grid")
    pr = cr & 1
    dv_max = min(cr, 2 * n - 2 - cr)
    if w < 1 + (cc & 1) or w > min(cc, 2 * m - 2 - cc) + 1 or (w - cc) % 2 == 0:
        raise ValueError(f"width {w} is not admissible at center {tuple(center)}")
    if height and (height > dv_max + 1 or (height - pr) % 2 == 0):
        raise ValueError(f"height {height} is not admissible at center {tuple(center)}")
    chars = tuple(index.chars)
    columns = tuple(index.columns)
    row = np.empty(k + 1, np.int64)
    offs = np.empty((2, k + 2), np.int64)
    used = 0
    dv = height - 1 if height else pr - 2
    while True:
        nxt = dv + 2
        if 1 <= nxt <= dv_max:
            nxt = int(_extend(columns, n, m, cr, cc, w, nxt, dv_max))
        if nxt > dv_max:
            return dv_max + 1, used, []
        c, _ = _row_mismatches(chars, n, m, cr, cc, nxt, w, k - used + 1, row, offs)
        if used + c > k:
            return nxt - 1, used, [int(x) for x in row[:c]]
        used += c
        dv = nxt
