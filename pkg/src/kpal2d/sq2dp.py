"""Maximal k-mismatch square palindromes.

Layer ``l`` of a square center is the ring of cells at Chebyshev distance
``l`` (half-cell centers start at ``l = 1``, the 2x2 core).  Its four sides
are compared pairwise under the two diagonal reflections:

====  ==================  ===================  ===========
pair  side A (read)       side B (read)        reflection
====  ==================  ===================  ===========
0     top, left->right    left, top->bottom    main
1     right, top->bottom  bottom, left->right  main
2     left, top->bottom   bottom, right->left  anti
3     top, left->right    right, bottom->top   anti
====  ==================  ===================  ===========

Every orbit of a layer meets all four pairs (the four sides form a cycle
for generic cells; each diagonal pair of corners is the endpoint pair of
two of them), so an orbit is non-uniform exactly when some pair flags one
of its cells.

The improved search stacks consecutive sides into trapezoids: a side of
width ``w`` with ``2^i <= w < 2^(i+1)`` is covered by its level-``i``
prefix and suffix names.  Across layers one of those two names stays on a
shared corner cell (an agreement-run lookup) and the other moves along a
diagonal through the center on opposite sides (an LCE query on the
diagonal texts).  A name disagreement is localized with character-level
kangaroo jumps.  Each pair keeps its first ``k + 1`` pairwise mismatches;
the four streams are merged layer by layer into orbit deficits.

Per center the improved search issues at most
``8 * log2(min(n, m)) + 16 * (k + 1)`` queries: two per band and per
disagreeing layer, plus one per located mismatch and one closing query
per localization, for each of the four pairs.
"""
from __future__ import annotations

import numpy as np
from numba import njit

from .grid import Grid, SqResults
from .lce import LceTables, build_tables, kangaroo_flat, lce_query
from .naming import (NameSet, agreement_runs, build_names, char_pos, char_text,
                     diag_layout, diag_pos, square_text)

# documented query bound: A * (log2 n + log2 m + k) + B
QUERY_BOUND_A = 16
QUERY_BOUND_B = 16


class SquareIndex:
    """Everything the square searches read: names, diagonal LCE texts,
    agreement runs and the character-level LCE over rows and columns."""

    def __init__(self, grid: Grid, names: NameSet | None, levels: int, layout,
                 mirror: LceTables | None, runs: np.ndarray | None, chars: LceTables):
        self.grid = grid
        self.names = names
        self.levels = levels
        self.layout = layout
        self.mirror = mirror
        self.runs = runs
        self.chars = chars

    @classmethod
    def build(cls, grid: Grid, with_names: bool = True) -> "SquareIndex":
        n, m = grid.n, grid.m
        text, _ = char_text(grid)
        chars = build_tables([text], max(n, m) + 1)
        if not with_names:
            return cls(grid, None, 0, None, None, None, chars)
        levels = min(n, m).bit_length() - 1
        names = build_names(grid, max_level=levels) if levels else None
        layout = diag_layout(n, m)
        run_dtype = np.int16 if min(n, m) < 32767 else np.int32
        runs = np.zeros((max(levels, 1), 4, n, m), run_dtype)
        texts = []
        for lev in range(1, levels + 1):
            runs[lev - 1] = agreement_runs(names, lev, run_dtype)
            texts.append(square_text(names, lev, layout)[0])
        if levels:
            # stacked build keeps only one level's construction buffers alive
            mirror = _build_stacked(texts, min(n, m) + 1)
        else:
            mirror = build_tables([np.zeros(1, np.int32)], 1)
        return cls(grid, names, levels, layout, mirror, runs, chars)

    @property
    def name_entries(self) -> int:
        return self.names.entry_count if self.names is not None else 0


def _build_stacked(texts, bound):
    tables = build_tables(texts[:1], bound)
    if len(texts) == 1:
        return tables
    full = [np.empty((len(texts),) + a.shape[1:], a.dtype) for a in tables[:5]]
    for a, f in zip(tables[:5], full):
        f[0] = a[0]
    for lev in range(1, len(texts)):
        texts[lev - 1] = None
        one = build_tables(texts[lev:lev + 1], bound)
        for a, f in zip(one[:5], full):
            f[lev] = a[0]
    return LceTables(*full, tables.lg)


@njit(cache=True)
def _ilog2(x):
    r = 0
    while x > 1:
        x >>= 1
        r += 1
    return r


@njit(cache=True)
def _geometry(cr, cc, layer):
    d = 2 * layer - (cr & 1)
    return (cr - d) // 2, (cr + d) // 2, (cc - d) // 2, (cc + d) // 2, d + 1


@njit(cache=True)
def _char_starts(pair, n, m, top, bot, left, right):
    if pair == 0:
        return char_pos(n, m, 0, top, left), char_pos(n, m, 2, top, left)
    if pair == 1:
        return char_pos(n, m, 2, top, right), char_pos(n, m, 0, bot, left)
    if pair == 2:
        return char_pos(n, m, 2, top, left), char_pos(n, m, 1, bot, right)
    return char_pos(n, m, 0, top, left), char_pos(n, m, 3, bot, right)


@njit(cache=True)
def _side_cells(pair, top, bot, left, right, off):
    """Cells of side A and side B at offset ``off`` along the pair's reading."""
    if pair == 0:
        return top, left + off, top + off, left
    if pair == 1:
        return top + off, right, bot, left + off
    if pair == 2:
        return top + off, left, bot, right - off
    return top, left + off, bot - off, right


@njit(cache=True)
def _mirror_starts(pair, start, block, n, m, top, bot, left, right):
    if pair == 0:
        return (diag_pos(start, block, n, m, 0, top, right),
                diag_pos(start, block, n, m, 1, bot, left))
    if pair == 1:
        return (diag_pos(start, block, n, m, 2, top, right),
                diag_pos(start, block, n, m, 3, bot, left))
    if pair == 2:
        return (diag_pos(start, block, n, m, 4, top, left),
                diag_pos(start, block, n, m, 5, bot, right))
    return (diag_pos(start, block, n, m, 6, top, left),
            diag_pos(start, block, n, m, 7, bot, right))


@njit(cache=True)
def _corner(pair, top, bot, left, right):
    if pair == 0:
        return top, left
    if pair == 1:
        return bot, right
    if pair == 2:
        return bot, left
    return top, right


@njit(cache=True)
def _stream(pair, cr, cc, k, lmax, n, m, mirror, start, block, runs, chars, ents, offs):
    """First ``k + 1`` pairwise mismatches of one trapezoid pair.

    Rows of ``ents``: (layer, row A, col A, row B, col B).  Returns the
    number of entries and the number of LCE queries issued.
    """
    found = 0
    queries = 0
    layer = 1
    while layer <= lmax and found <= k:
        top, bot, left, right, w = _geometry(cr, cc, layer)
        lev = _ilog2(w)
        hi = (1 << lev) - 1
        if hi > lmax:
            hi = lmax
        ci, cj = _corner(pair, top, bot, left, right)
        run = np.int64(runs[lev - 1, pair, ci, cj])
        pa, pb = _mirror_starts(pair, start, block, n, m, top, bot, left, right)
        x = lce_query(mirror, lev - 1, pa, pb)
        queries += 2
        if x < run:
            run = x
        if run > hi - layer + 1:
            run = hi - layer + 1
        layer += run
        if layer > hi:
            continue
        top, bot, left, right, w = _geometry(cr, cc, layer)
        pa, pb = _char_starts(pair, n, m, top, bot, left, right)
        _, got, qq = kangaroo_flat(chars, 0, pa, pb, w, k - found, offs)
        queries += qq
        for e in range(got):
            ia, ja, ib, jb = _side_cells(pair, top, bot, left, right, offs[e])
            ents[found, 0] = layer
            ents[found, 1] = ia
            ents[found, 2] = ja
            ents[found, 3] = ib
            ents[found, 4] = jb
            found += 1
        layer += 1
    return found, queries


@njit(cache=True)
def _orbit_stats(t, cr, cc, i, j, cells):
    """Fill ``cells`` with the orbit of (i, j); return (size, rep key, majority, deficit)."""
    m = t.shape[1]
    delta = (cr - cc) // 2
    s = (cr + cc) // 2
    cand = ((i, j), (j + delta, i - delta), (s - j, s - i), (cr - i, cc - j))
    size = 0
    rep = -1
    for a, b in cand:
        key = a * m + b
        dup = False
        for x in range(size):
            if cells[x, 0] * m + cells[x, 1] == key:
                dup = True
        if not dup:
            cells[size, 0] = a
            cells[size, 1] = b
            size += 1
            if rep < 0 or key < rep:
                rep = key
    best = 0
    major = -1
    for x in range(size):
        sym = t[cells[x, 0], cells[x, 1]]
        c = 0
        for y in range(size):
            if t[cells[y, 0], cells[y, 1]] == sym:
                c += 1
        if c > best or (c == best and sym < major):
            best = c
            major = sym
    return size, rep, major, size - best


@njit(cache=True)
def _merge(t, cr, cc, k, lmax, ents, counts, pos_out, buf, cells):
    """Resolve flagged cells to orbits layer by layer; return (layer, mismatches).

    ``buf`` is scratch space of shape (4, 4 * (k + 1)).
    """
    cap = lmax + 1
    for s in range(4):
        if counts[s] == k + 1 and ents[s, k, 0] < cap:
            cap = ents[s, k, 0]
    lay = buf[0]
    ci = buf[1]
    cj = buf[2]
    reps = buf[3]
    nsel = 0
    for s in range(4):
        for e in range(counts[s]):
            if ents[s, e, 0] <= cap:
                # insertion keeps entries sorted by layer
                x = nsel
                while x > 0 and lay[x - 1] > ents[s, e, 0]:
                    lay[x] = lay[x - 1]
                    ci[x] = ci[x - 1]
                    cj[x] = cj[x - 1]
                    x -= 1
                lay[x] = ents[s, e, 0]
                ci[x] = ents[s, e, 1]
                cj[x] = ents[s, e, 2]
                nsel += 1
    npos = 0
    cum = 0
    answer = lmax
    x = 0
    while x < nsel:
        layer = lay[x]
        y = x
        while y < nsel and lay[y] == layer:
            y += 1
        nrep = 0
        layer_def = 0
        for e in range(x, y):
            size, rep, major, deficit = _orbit_stats(t, cr, cc, ci[e], cj[e], cells)
            seen = False
            for r in range(nrep):
                if reps[r] == rep:
                    seen = True
            if seen:
                continue
            reps[nrep] = rep
            nrep += 1
            layer_def += deficit
        if cum + layer_def > k:
            answer = layer - 1
            break
        cum += layer_def
        if pos_out.shape[0] > 0 and layer_def > 0:
            for r in range(nrep):
                size, rep, major, deficit = _orbit_stats(
                    t, cr, cc, reps[r] // t.shape[1], reps[r] % t.shape[1], cells)
                for z in range(size):
                    if t[cells[z, 0], cells[z, 1]] != major and npos < pos_out.shape[0]:
                        pos_out[npos, 0] = cells[z, 0]
                        pos_out[npos, 1] = cells[z, 1]
                        npos += 1
        x = y
    return answer, cum


@njit(cache=True)
def _center_count(n, m):
    total = 0
    for cr in range(2 * n - 1):
        total += (2 * m - 1 - (cr & 1) + 1) // 2
    return total


@njit(cache=True)
def _sq_improved_kernel(t, k, mirror, start, block, runs, chars, kpos):
    n, m = t.shape
    nc = _center_count(n, m)
    out = np.zeros((nc, 5), np.int64)
    positions = np.full((nc if kpos > 0 else 0, max(kpos, 1), 2), -1, np.int64)
    dummy = np.empty((0, 2), np.int64)
    ents = np.empty((4, k + 1, 5), np.int64)
    counts = np.zeros(4, np.int64)
    offs = np.empty(k + 2, np.int64)
    buf = np.empty((4, 4 * (k + 1)), np.int64)
    cells = np.empty((4, 2), np.int64)
    idx = 0
    for cr in range(2 * n - 1):
        for cc in range(cr & 1, 2 * m - 1, 2):
            p = cr & 1
            dmax = min(cr, cc, 2 * n - 2 - cr, 2 * m - 2 - cc)
            lmax = (dmax + p) // 2
            queries = 0
            for pair in range(4):
                c, q = _stream(pair, cr, cc, k, lmax, n, m, mirror, start, block,
                               runs, chars, ents[pair], offs)
                counts[pair] = c
                queries += q
            pos_out = positions[idx] if kpos > 0 else dummy
            layer, cum = _merge(t, cr, cc, k, lmax, ents, counts, pos_out, buf, cells)
            out[idx, 0] = cr
            out[idx, 1] = cc
            out[idx, 2] = 2 * layer + 1 - p
            out[idx, 3] = cum
            out[idx, 4] = queries
            idx += 1
    return out, positions


@njit(cache=True)
def _sq_baseline_kernel(t, k, chars):
    n, m = t.shape
    nc = _center_count(n, m)
    out = np.zeros((nc, 5), np.int64)
    offs = np.empty(k + 2, np.int64)
    cells = np.empty((4, 2), np.int64)
    reps = np.empty(4 * (k + 1), np.int64)
    idx = 0
    for cr in range(2 * n - 1):
        for cc in range(cr & 1, 2 * m - 1, 2):
            p = cr & 1
            dmax = min(cr, cc, 2 * n - 2 - cr, 2 * m - 2 - cc)
            lmax = (dmax + p) // 2
            cum = 0
            answer = 0
            queries = 0
            for layer in range(1, lmax + 1):
                top, bot, left, right, w = _geometry(cr, cc, layer)
                rem = k - cum
                nrep = 0
                layer_def = 0
                for pair in range(4):
                    pa, pb = _char_starts(pair, n, m, top, bot, left, right)
                    _, got, qq = kangaroo_flat(chars, 0, pa, pb, w, rem, offs)
                    queries += qq
                    for e in range(got):
                        ia, ja, ib, jb = _side_cells(pair, top, bot, left, right, offs[e])
                        size, rep, major, deficit = _orbit_stats(t, cr, cc, ia, ja, cells)
                        seen = False
                        for r in range(nrep):
                            if reps[r] == rep:
                                seen = True
                        if not seen:
                            reps[nrep] = rep
                            nrep += 1
                            layer_def += deficit
                if layer_def > rem:
                    break
                cum += layer_def
                answer = layer
            out[idx, 0] = cr
            out[idx, 1] = cc
            out[idx, 2] = 2 * answer + 1 - p
            out[idx, 3] = cum
            out[idx, 4] = queries
            idx += 1
    return out


@njit(cache=True)
def _direct_positions(t, cr, cc, side, out):
    """Non-majority cells of a square by full enumeration (ties: smallest symbol)."""
    cells = np.empty((4, 2), np.int64)
    top = (cr - side + 1) // 2
    left = (cc - side + 1) // 2
    npos = 0
    for i in range(top, top + side):
        for j in range(left, left + side):
            size, rep, major, deficit = _orbit_stats(t, cr, cc, i, j, cells)
            if t[i, j] != major and npos < out.shape[0]:
                out[npos, 0] = i
                out[npos, 1] = j
                npos += 1
    return npos


def _position_blocks(t, rec, k):
    kpos = max(1, min(k, t.size))
    blocks = np.full((len(rec), kpos, 2), -1, np.int64)
    for r, (cr, cc, side, _) in enumerate(rec[:, :4]):
        _direct_positions(t, int(cr), int(cc), int(side), blocks[r])
    return blocks


def _results(rec, positions=None):
    queries = rec[:, [0, 1, 4]]
    keep = rec[:, 2] > 0
    pos = positions[keep] if positions is not None else None
    rec = rec[keep]
    return SqResults(rec[:, 0], rec[:, 1], rec[:, 2], rec[:, 3], pos, queries)


def sq_improved(g: Grid, k: int, index: SquareIndex | None = None,
                positions: bool = False) -> SqResults:
    """Trapezoid matching over diagonals of names, then a layer-ordered merge.

    ``results.queries`` has one ``(cr, cc, count)`` row per square center,
    productive or not, with the number of LCE queries spent there.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    index = index or SquareIndex.build(g)
    kpos = max(1, min(k, g.cells.size)) if positions else 0
    rec, pos = _sq_improved_kernel(g.cells, k, tuple(index.mirror), index.layout.start
                                   if index.layout is not None else np.zeros(1, np.int64),
                                   index.layout.block if index.layout is not None else 0,
                                   index.runs if index.runs is not None
                                   else np.zeros((1, 4, 1, 1), np.int16),
                                   tuple(index.chars), kpos)
    return _results(rec, pos if positions else None)


def sq_baseline(g: Grid, k: int, index: SquareIndex | None = None,
                positions: bool = False) -> SqResults:
    """Layer-by-layer growth with four kangaroo comparisons per layer."""
    if k < 0:
        raise ValueError("k must be non-negative")
    index = index or SquareIndex.build(g, with_names=False)
    rec = _sq_baseline_kernel(g.cells, k, tuple(index.chars))
    res = _results(rec)
    if positions:
        res.positions = _position_blocks(g.cells, res.records(), k)
    return res


def with_positions(g: Grid, res: SqResults, k: int) -> SqResults:
    """Attach mismatch cells found by direct enumeration of each square."""
    res.positions = _position_blocks(g.cells, res.records(), k)
    return res


def match_trapezoids(index: SquareIndex, center, pair: int, k: int) -> list[tuple]:
    """Stream of the first ``k + 1`` pairwise mismatches for one trapezoid pair.

    ``pair`` indexes (top, left), (right, bottom), (left, bottom), (top, right).
    Entries are ``(layer, cell_a, cell_b)``, nondecreasing in layer.
    """
    cr, cc = center
    if (cr - cc) % 2:
        from .grid import InvalidCenterError
        raise InvalidCenterError(f"center {tuple(center)} is not a square center")
    if pair not in range(4):
        raise ValueError("pair must be 0..3")
    if index.mirror is None:
        raise ValueError("index was built without names")
    n, m = index.grid.n, index.grid.m
    if not (0 <= cr <= 2 * n - 2 and 0 <= cc <= 2 * m - 2):
        raise ValueError("center outside the grid")
    p = cr & 1
    lmax = (min(cr, cc, 2 * n - 2 - cr, 2 * m - 2 - cc) + p) // 2
    ents = np.empty((k + 1, 5), np.int64)
    offs = np.empty(k + 2, np.int64)
    found, _ = _stream(pair, cr, cc, k, lmax, n, m, tuple(index.mirror), index.layout.start,
                       index.layout.block, index.runs, tuple(index.chars), ents, offs)
    return [(int(e[0]), (int(e[1]), int(e[2])), (int(e[3]), int(e[4]))) for e in ents[:found]]
