"""Power-of-two names of subrows and subcolumns, read in both directions.

Level ``j`` names cover ``2**j`` cells.  Four families exist per level:

========  ============================================  ==================
family    ``names[i, c]`` identifies                    read
========  ============================================  ==================
``R``     ``T[i, c .. c+2^j-1]``                        left to right
``Rb``    ``T[i, c-2^j+1 .. c]``                        right to left
``C``     ``T[i .. i+2^j-1, c]``                        top to bottom
``Cb``    ``T[i-2^j+1 .. i, c]``                        bottom to top
========  ============================================  ==================

Backward families are anchored at the segment's last cell.  All families
of one level share one dictionary, so a name read along a row can be
compared with a name read along a column.  Entries whose segment leaves
the grid are ``-1``.

This module also lays the name grids out as flat texts for LCE indexing:
columns for the rectangle search, diagonals for the square search.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numba import njit

from .grid import Grid

FAMILIES = ("R", "Rb", "C", "Cb")


@dataclass(frozen=True)
class NameGrid:
    level: int
    direction: str
    names: np.ndarray


class NameSet:
    """All name grids of a grid, ``grids[direction][level]`` (level 0 = symbols)."""

    def __init__(self, grid: Grid, grids: dict, max_row_level: int, max_col_level: int):
        self.grid = grid
        self.grids = grids
        self.max_row_level = max_row_level
        self.max_col_level = max_col_level

    def get(self, direction: str, level: int) -> NameGrid:
        return NameGrid(level, direction, self.grids[direction][level])

    def __iter__(self):
        for d in FAMILIES:
            for lev, arr in enumerate(self.grids.get(d, ())):
                if lev and arr is not None:
                    yield NameGrid(lev, d, arr)

    @property
    def entry_count(self) -> int:
        """Number of in-range names stored for levels >= 1."""
        return int(sum(int((ng.names >= 0).sum()) for ng in self))


def build_names(g: Grid, max_level: int | None = None, axes: str = "both") -> NameSet:
    """KMR doubling over all four reading directions.

    ``axes`` is ``"both"`` or ``"rows"`` (the rectangle search only reads rows).
    Row families stop at ``2^j <= m``, column families at ``2^j <= n``.
    """
    t = g.cells.astype(np.int64)
    n, m = t.shape
    jr = m.bit_length() - 1
    jc = n.bit_length() - 1 if axes == "both" else 0
    if max_level is not None:
        if (1 << max_level) > max(n, m):
            raise ValueError("2**max_level exceeds both grid dimensions")
        jr, jc = min(jr, max_level), min(jc, max_level)
    grids = {d: [t.astype(np.int32)] for d in FAMILIES}
    vocab = g.sigma
    for lev in range(1, max(jr, jc) + 1):
        h = 1 << (lev - 1)
        keys = []
        for d in FAMILIES:
            if (d in ("R", "Rb") and lev > jr) or (d in ("C", "Cb") and lev > jc):
                keys.append(None)
                continue
            prev = grids[d][lev - 1].astype(np.int64)
            second = np.full_like(prev, -1)
            if d == "R":
                second[:, :m - h] = prev[:, h:]
            elif d == "Rb":
                second[:, h:] = prev[:, :m - h]
            elif d == "C":
                second[:n - h, :] = prev[h:, :]
            else:
                second[h:, :] = prev[:n - h, :]
            ok = (prev >= 0) & (second >= 0)
            keys.append((ok, prev * vocab + second))
        flat = np.concatenate([k[1][k[0]] for k in keys if k is not None])
        uniq, inv = np.unique(flat, return_inverse=True)
        pos = 0
        for d, k in zip(FAMILIES, keys):
            if k is None:
                grids[d].append(None)
                continue
            ok, key = k
            out = np.full(key.shape, -1, np.int32)
            cnt = int(ok.sum())
            out[ok] = inv[pos:pos + cnt]
            pos += cnt
            grids[d].append(out)
        vocab = len(uniq)
    return NameSet(g, grids, jr, jc)


def naive_name_key(t: np.ndarray, direction: str, level: int, i: int, c: int):
    """The raw symbol string a name stands for, or None when out of range."""
    w = 1 << level
    n, m = t.shape
    if direction == "R":
        ok = c + w <= m
        seg = t[i, c:c + w] if ok else None
    elif direction == "Rb":
        ok = c - w + 1 >= 0
        seg = t[i, c - w + 1:c + 1][::-1] if ok else None
    elif direction == "C":
        ok = i + w <= n
        seg = t[i:i + w, c] if ok else None
    else:
        ok = i - w + 1 >= 0
        seg = t[i - w + 1:i + 1, c][::-1] if ok else None
    return tuple(seg.tolist()) if ok else None


# --- flat layouts ---------------------------------------------------------------

class DiagLayout(NamedTuple):
    """Diagonal ``x`` holds the cells with ``imin[x] <= i <= imax[x]``.

    Anti-diagonals are keyed by ``x = i + j``, main diagonals by
    ``x = i - j + m - 1``; both give the same row range formula.
    """
    n: int
    m: int
    start: np.ndarray
    block: int


def diag_layout(n: int, m: int) -> DiagLayout:
    x = np.arange(n + m - 1)
    lengths = np.minimum(n - 1, x) - np.maximum(0, x - (m - 1)) + 1
    start = np.zeros(n + m - 1, np.int64)
    start[1:] = np.cumsum(lengths + 1)[:-1]
    return DiagLayout(n, m, start, int(lengths.sum() + len(lengths)))


# The square search reads eight (family, diagonal, orientation) streams per
# level.  "up" runs with decreasing row index, "down" with increasing.
SQUARE_STREAMS = (
    ("Rb", "anti", "up"), ("Cb", "anti", "down"),
    ("C", "anti", "up"), ("R", "anti", "down"),
    ("C", "main", "up"), ("Rb", "main", "down"),
    ("R", "main", "up"), ("Cb", "main", "down"),
)


@njit(cache=True)
def diag_pos(start, block, n, m, stream, i, j):
    """Flat position of cell (i, j) inside square stream ``stream``."""
    if stream < 4:
        x = i + j
    else:
        x = i - j + m - 1
    lo = x - (m - 1)
    if lo < 0:
        lo = 0
    hi = x if x < n - 1 else n - 1
    base = stream * block + start[x]
    if stream % 2 == 0:
        return base + hi - i
    return base + i - lo


@njit(cache=True)
def _square_text(fams, start, block, n, m, sep_base, out):
    """Write the eight streams; absent names and separators get unique codes."""
    uniq = sep_base
    for s in range(8):
        f = fams[s]
        for x in range(n + m - 1):
            lo = max(0, x - (m - 1))
            hi = min(n - 1, x)
            for i in range(lo, hi + 1):
                j = x - i if s < 4 else i - x + m - 1
                v = f[i, j]
                if v < 0:
                    v = uniq
                    uniq += 1
                out[diag_pos(start, block, n, m, s, i, j)] = v
            out[s * block + start[x] + hi - lo + 1] = uniq
            uniq += 1
    return uniq


def square_text(names: NameSet, level: int, layout: DiagLayout):
    """Flat text of the eight square streams at ``level`` and its alphabet size."""
    n, m = layout.n, layout.m
    fams = tuple(names.grids[f][level] for f, _, _ in SQUARE_STREAMS)
    out = np.empty(8 * layout.block, np.int32)
    vocab = int(max(int(a.max()) for a in fams)) + 1
    size = _square_text(fams, layout.start, layout.block, n, m, vocab, out)
    return out, int(size)


@njit(cache=True)
def rect_pos(n, m, stream, c, i):
    """Flat position in a rectangle text: stream 0 = R columns read upward,
    stream 1 = Rb columns read downward."""
    if stream == 0:
        return c * (n + 1) + (n - 1 - i)
    return m * (n + 1) + c * (n + 1) + i


def rect_block(n: int, m: int) -> int:
    return m * (n + 1)


@njit(cache=True)
def _rect_text(fwd, bwd, sep_base, out):
    n, m = fwd.shape
    block = m * (n + 1)
    uniq = sep_base
    for c in range(m):
        base = c * (n + 1)
        for i in range(n):
            v = fwd[i, c]
            if v < 0:
                v = uniq
                uniq += 1
            out[base + n - 1 - i] = v
            v = bwd[i, c]
            if v < 0:
                v = uniq
                uniq += 1
            out[block + base + i] = v
        out[base + n] = uniq
        out[block + base + n] = uniq + 1
        uniq += 2
    return uniq


def rect_text(names: NameSet, level: int):
    fwd = names.grids["R"][level]
    bwd = names.grids["Rb"][level]
    n, m = fwd.shape
    out = np.empty(2 * rect_block(n, m), np.int32)
    vocab = int(max(fwd.max(), bwd.max())) + 1
    size = _rect_text(fwd, bwd, vocab, out)
    return out, int(size)


@njit(cache=True)
def char_pos(n, m, stream, i, j):
    """Flat position in the character text: rows left-to-right, rows
    right-to-left, columns top-to-bottom, columns bottom-to-top."""
    frow = n * (m + 1)
    if stream == 0:
        return i * (m + 1) + j
    if stream == 1:
        return frow + i * (m + 1) + (m - 1 - j)
    if stream == 2:
        return 2 * frow + j * (n + 1) + i
    return 2 * frow + m * (n + 1) + j * (n + 1) + (n - 1 - i)


def char_text(g: Grid):
    t = g.cells
    n, m = t.shape
    sep = g.sigma
    parts = []
    for rows in (t, t[:, ::-1]):
        block = np.empty((n, m + 1), np.int32)
        block[:, :m] = rows
        block[:, m] = sep + np.arange(n)
        sep += n
        parts.append(block.ravel())
    for cols in (t.T, t.T[:, ::-1]):
        block = np.empty((m, n + 1), np.int32)
        block[:, :n] = cols
        block[:, n] = sep + np.arange(m)
        sep += m
        parts.append(block.ravel())
    return np.concatenate(parts), sep


@njit(cache=True)
def _agreement_runs(a, b, di, dj, out):
    """out[i, j] = number of steps k >= 0 with a == b at (i + k*di, j + k*dj)."""
    n, m = a.shape
    for ii in range(n):
        i = n - 1 - ii if di > 0 else ii
        for jj in range(m):
            j = m - 1 - jj if dj > 0 else jj
            va = a[i, j]
            if va >= 0 and va == b[i, j]:
                ni = i + di
                nj = j + dj
                nxt = 0
                if 0 <= ni < n and 0 <= nj < m:
                    nxt = out[ni, nj]
                out[i, j] = nxt + 1
            else:
                out[i, j] = 0


# Aligned comparisons: (family a, family b, outward step).  Both names sit
# on the same corner cell of the layer, and the corner moves one diagonal
# step per layer.
SQUARE_ALIGNED = (
    ("R", "C", -1, -1),    # top-left corner
    ("Cb", "Rb", 1, 1),    # bottom-right corner
    ("Cb", "R", 1, -1),    # bottom-left corner
    ("Rb", "C", -1, 1),    # top-right corner
)


def agreement_runs(names: NameSet, level: int, dtype=np.int32) -> np.ndarray:
    n, m = names.grid.n, names.grid.m
    out = np.empty((4, n, m), dtype)
    for s, (fa, fb, di, dj) in enumerate(SQUARE_ALIGNED):
        _agreement_runs(names.grids[fa][level], names.grids[fb][level], di, dj, out[s])
    return out


# --- tagged sequence views --------------------------------------------------------

@dataclass(frozen=True)
class NameSequence:
    level: int
    direction: str
    line: str          # "column", "anti" or "main"
    line_id: int
    orientation: str   # "up" or "down"
    cells: tuple       # grid cell of each entry
    values: np.ndarray


def sequences_for_rect(names: NameSet, levels=None) -> list[NameSequence]:
    """Columns of R read downward and of Rb read upward, in-range columns only."""
    n, m = names.grid.n, names.grid.m
    out = []
    for lev in levels if levels is not None else range(1, names.max_row_level + 1):
        w = 1 << lev
        for d, orient in (("R", "down"), ("Rb", "up")):
            arr = names.grids[d][lev]
            cols = range(m - w + 1) if d == "R" else range(w - 1, m)
            for c in cols:
                rows = range(n) if orient == "down" else range(n - 1, -1, -1)
                cells = tuple((i, c) for i in rows)
                out.append(NameSequence(lev, d, "column", c, orient, cells,
                                        np.array([arr[i, c] for i, _ in cells])))
    return out


def sequences_for_square(names: NameSet, levels=None) -> list[NameSequence]:
    """The eight diagonal streams per level that the square search consumes.

    Absent names only occur at the ends of a diagonal and are trimmed.
    """
    n, m = names.grid.n, names.grid.m
    top = min(names.max_row_level, names.max_col_level)
    out = []
    for lev in levels if levels is not None else range(1, top + 1):
        for d, line, orient in SQUARE_STREAMS:
            arr = names.grids[d][lev]
            for x in range(n + m - 1):
                lo, hi = max(0, x - (m - 1)), min(n - 1, x)
                rows = range(lo, hi + 1) if orient == "down" else range(hi, lo - 1, -1)
                cells = [(i, x - i) if line == "anti" else (i, i - x + m - 1) for i in rows]
                cells = tuple(p for p in cells if arr[p] >= 0)
                if cells:
                    out.append(NameSequence(lev, d, line, x, orient, cells,
                                            np.array([arr[p] for p in cells])))
    return out
