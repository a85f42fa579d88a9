"""Grid model, center/symmetry conventions, mismatch counting and oracles.

Cells are 0-indexed ``(row, col)``.  Centers use *doubled* coordinates: a
block spanning rows ``a..b`` and columns ``l..r`` has center ``(a + b, l + r)``,
so half-cell centers stay integral.  An odd center coordinate forces an even
extent along that axis and vice versa.

The brute-force oracles at the bottom grow every block from its center and
recount from the definitions; they are the ground truth for the fast paths.
"""
from __future__ import annotations

from collections import Counter
from collections.abc import Sequence as SequenceABC
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from numba import njit


class Pal2dError(Exception):
    """Base class for errors raised by this package."""


class InvalidCenterError(Pal2dError, ValueError):
    pass


class BoundsError(Pal2dError, IndexError):
    pass


class GridFormatError(Pal2dError, ValueError):
    pass


class Center(NamedTuple):
    cr: int
    cc: int

    @property
    def is_square(self) -> bool:
        return (self.cr - self.cc) % 2 == 0


Position = tuple[int, int]


@dataclass(frozen=True, eq=False)
class Grid:
    """An ``n x m`` text over dense integer symbol codes.

    ``alphabet[code]`` is the original symbol; codes follow the sort order of
    the original symbols, so the smallest code is the smallest symbol.
    """

    cells: np.ndarray
    alphabet: tuple = ()

    def __post_init__(self):
        if self.cells.ndim != 2 or self.cells.shape[0] < 1 or self.cells.shape[1] < 1:
            raise GridFormatError("grid must be a non-empty 2D array")

    @property
    def n(self) -> int:
        return self.cells.shape[0]

    @property
    def m(self) -> int:
        return self.cells.shape[1]

    @property
    def sigma(self) -> int:
        return len(self.alphabet)

    @classmethod
    def from_rows(cls, rows: Iterable[str | bytes]) -> "Grid":
        rows = [r.encode() if isinstance(r, str) else bytes(r) for r in rows]
        if not rows:
            raise GridFormatError("empty grid")
        for i, r in enumerate(rows):
            if len(r) != len(rows[0]):
                raise GridFormatError(
                    f"row {i + 1} has length {len(r)}, expected {len(rows[0])}")
        raw = np.array([list(r) for r in rows], dtype=np.int64)
        return cls.from_symbols(raw)

    @classmethod
    def from_symbols(cls, symbols) -> "Grid":
        """Build from any 2D array of comparable symbols, densifying the codes."""
        arr = np.asarray(symbols)
        if arr.ndim != 2 or arr.size == 0:
            raise GridFormatError("grid must be a non-empty 2D array")
        alphabet, codes = np.unique(arr, return_inverse=True)
        cells = codes.reshape(arr.shape).astype(np.int32)
        cells.setflags(write=False)
        return cls(cells, tuple(alphabet.tolist()))

    def rows_text(self) -> list[str]:
        def sym(c):
            s = self.alphabet[c]
            return chr(s) if isinstance(s, int) else str(s)
        return ["".join(sym(c) for c in row) for row in self.cells.tolist()]

    def __getitem__(self, pos: Position) -> int:
        return int(self.cells[pos])

    def __eq__(self, other):
        if not isinstance(other, Grid):
            return NotImplemented
        return self.cells.shape == other.cells.shape and bool((self.cells == other.cells).all())

    __hash__ = None


@dataclass(frozen=True)
class Orbit:
    positions: frozenset
    layer: int


@dataclass(frozen=True)
class SqPalindrome:
    center: Center
    side: int
    mismatches: int
    mismatch_positions: tuple | None = None

    def record(self) -> tuple:
        return ("sq", self.center.cr, self.center.cc, self.side, self.mismatches)


@dataclass(frozen=True)
class RectPalindrome:
    center: Center
    width: int
    height: int
    mismatches: int

    def record(self) -> tuple:
        return ("rect", self.center.cr, self.center.cc, self.width, self.height, self.mismatches)


class SqResults(SequenceABC):
    """Array-backed list of :class:`SqPalindrome`, ordered by center.

    ``positions`` (optional) holds, per record, a ``(k, 2)`` block of
    mismatch cells padded with ``-1``.  ``queries`` (optional) holds
    ``(cr, cc, count)`` rows for every center the search visited.
    """

    def __init__(self, cr, cc, side, mismatches, positions=None, queries=None):
        self.cr = np.asarray(cr, np.int64)
        self.cc = np.asarray(cc, np.int64)
        self.side = np.asarray(side, np.int64)
        self.mismatches = np.asarray(mismatches, np.int64)
        self.positions = positions
        self.queries = queries

    def __len__(self):
        return len(self.cr)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        pos = None
        if self.positions is not None:
            block = self.positions[i]
            pos = tuple(sorted((int(a), int(b)) for a, b in block if a >= 0))
        return SqPalindrome(Center(int(self.cr[i]), int(self.cc[i])), int(self.side[i]),
                            int(self.mismatches[i]), pos)

    def records(self) -> np.ndarray:
        return np.stack([self.cr, self.cc, self.side, self.mismatches], axis=1)

    def find(self, center) -> SqPalindrome | None:
        hit = np.flatnonzero((self.cr == center[0]) & (self.cc == center[1]))
        return self[int(hit[0])] if hit.size else None


class RectResults(SequenceABC):
    """Array-backed list of :class:`RectPalindrome`, ordered by (center, -width).

    ``queries`` (optional) holds ``(cr, cc, count)`` rows for every center.
    """

    def __init__(self, cr, cc, width, height, mismatches, queries=None):
        self.cr = np.asarray(cr, np.int64)
        self.cc = np.asarray(cc, np.int64)
        self.width = np.asarray(width, np.int64)
        self.height = np.asarray(height, np.int64)
        self.mismatches = np.asarray(mismatches, np.int64)
        self.queries = queries

    def __len__(self):
        return len(self.cr)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        return RectPalindrome(Center(int(self.cr[i]), int(self.cc[i])), int(self.width[i]),
                              int(self.height[i]), int(self.mismatches[i]))

    def records(self) -> np.ndarray:
        return np.stack([self.cr, self.cc, self.width, self.height, self.mismatches], axis=1)

    def at(self, center) -> list[RectPalindrome]:
        hit = np.flatnonzero((self.cr == center[0]) & (self.cc == center[1]))
        return [self[int(j)] for j in hit]


# --- coordinates and symmetry -------------------------------------------------

def rotate180(center: Sequence[int], p: Position) -> Position:
    """Image of cell ``p`` under the half-turn about ``center``.

    The real-valued center is ``(cr/2, cc/2)``, so the image of ``(i, j)`` is
    ``(cr - i, cc - j)``.
    """
    cr, cc = center
    return (cr - p[0], cc - p[1])


def _check_square_center(center):
    cr, cc = center
    if (cr - cc) % 2:
        raise InvalidCenterError(f"center {tuple(center)} is not a square center")


def layer_of(center: Sequence[int], p: Position) -> int:
    cr, cc = center
    d = max(abs(2 * p[0] - cr), abs(2 * p[1] - cc))
    return d // 2 if cr % 2 == 0 else (d + 1) // 2


def orbit_of(center: Sequence[int], p: Position) -> Orbit:
    """Closure of ``p`` under both diagonal reflections about a square center."""
    _check_square_center(center)
    cr, cc = center
    i, j = p
    delta = (cr - cc) // 2
    s = (cr + cc) // 2
    pts = frozenset({(i, j), (j + delta, i - delta), (s - j, s - i), (cr - i, cc - j)})
    return Orbit(pts, layer_of(center, p))


def block_rows(c: int, extent: int) -> range:
    """Indices covered by an ``extent``-long span centered at doubled ``c``."""
    return range((c - extent + 1) // 2, (c + extent - 1) // 2 + 1)


def _admissible(c: int, extent: int) -> bool:
    return extent >= 1 and (extent % 2 == 1) == (c % 2 == 0)


def _check_block(g: Grid, center, w: int, h: int):
    cr, cc = center
    if not (_admissible(cr, h) and _admissible(cc, w)):
        raise InvalidCenterError(f"extent {w}x{h} has the wrong parity for center {tuple(center)}")
    rows, cols = block_rows(cr, h), block_rows(cc, w)
    if rows[0] < 0 or rows[-1] >= g.n or cols[0] < 0 or cols[-1] >= g.m:
        raise BoundsError(f"{w}x{h} block at center {tuple(center)} leaves the grid")
    return rows, cols


def _orbit_deficit(g: Grid, orbit: Orbit) -> int:
    counts = Counter(g[p] for p in orbit.positions)
    return len(orbit.positions) - max(counts.values())


def sq_mismatch_count(g: Grid, center, side: int) -> int:
    """Sum over orbits of (orbit size - multiplicity of its majority symbol)."""
    _check_square_center(center)
    rows, cols = _check_block(g, center, side, side)
    seen = set()
    total = 0
    for i in rows:
        for j in cols:
            orb = orbit_of(center, (i, j))
            if orb.positions in seen:
                continue
            seen.add(orb.positions)
            total += _orbit_deficit(g, orb)
    return total


def sq_layer_deficits(g: Grid, center, side: int) -> list[int]:
    """Per-layer orbit deficits of the square; they sum to sq_mismatch_count."""
    _check_square_center(center)
    rows, cols = _check_block(g, center, side, side)
    per = {}
    seen = set()
    for i in rows:
        for j in cols:
            orb = orbit_of(center, (i, j))
            if orb.positions not in seen:
                seen.add(orb.positions)
                per[orb.layer] = per.get(orb.layer, 0) + _orbit_deficit(g, orb)
    return [per.get(l, 0) for l in range(max(per) + 1)]


def sq_mismatch_positions(g: Grid, center, side: int) -> tuple:
    """Cells disagreeing with their orbit's majority (ties go to the smallest symbol)."""
    _check_square_center(center)
    rows, cols = _check_block(g, center, side, side)
    out = []
    for i in rows:
        for j in cols:
            orb = orbit_of(center, (i, j))
            counts = Counter(g[p] for p in orb.positions)
            best = max(counts.values())
            major = min(s for s, c in counts.items() if c == best)
            if g[(i, j)] != major:
                out.append((i, j))
    return tuple(sorted(out))


def rect_mismatch_count(g: Grid, center, w: int, h: int) -> int:
    """Number of unordered half-turn pairs inside the block holding different symbols."""
    rows, cols = _check_block(g, center, w, h)
    total = 0
    for i in rows:
        for j in cols:
            q = rotate180(center, (i, j))
            if (i, j) < q and g[(i, j)] != g[q]:
                total += 1
    return total


# --- brute-force oracles --------------------------------------------------------

@njit(cache=True)
def _sq_layer_deficit(t, cr, cc, layer):
    """Deficit of all orbits on one layer, enumerated cell by cell."""
    p = cr & 1
    d = 2 * layer - p
    top = (cr - d) // 2
    left = (cc - d) // 2
    delta = (cr - cc) // 2
    s = (cr + cc) // 2
    m = t.shape[1]
    total = 0
    for i in range(top, top + d + 1):
        for j in range(left, left + d + 1):
            if max(abs(2 * i - cr), abs(2 * j - cc)) != d:
                continue
            pts = ((i, j), (j + delta, i - delta), (s - j, s - i), (cr - i, cc - j))
            rep = i * m + j
            for a, b in pts:
                if a * m + b < rep:
                    rep = -1
                    break
            if rep < 0:
                continue
            uniq = np.empty(4, np.int64)
            syms = np.empty(4, np.int64)
            size = 0
            for a, b in pts:
                key = a * m + b
                dup = False
                for x in range(size):
                    if uniq[x] == key:
                        dup = True
                if not dup:
                    uniq[size] = key
                    syms[size] = t[a, b]
                    size += 1
            best = 0
            for x in range(size):
                c = 0
                for y in range(size):
                    if syms[y] == syms[x]:
                        c += 1
                best = max(best, c)
            total += size - best
    return total


@njit(cache=True)
def _brute_sq(t, k):
    n, m = t.shape
    out = np.empty((4 * n * m, 4), np.int64)
    cnt = 0
    for cr in range(2 * n - 1):
        for cc in range(cr & 1, 2 * m - 1, 2):
            p = cr & 1
            dmax = min(cr, cc, 2 * n - 2 - cr, 2 * m - 2 - cc)
            lmax = (dmax + p) // 2
            best = -1
            total = 0
            good = 0
            start = 0 if p == 0 else 1
            for layer in range(start, lmax + 1):
                if layer > 0:
                    total += _sq_layer_deficit(t, cr, cc, layer)
                if total > k:
                    break
                best = layer
                good = total
            if best < 0:
                continue
            out[cnt, 0] = cr
            out[cnt, 1] = cc
            out[cnt, 2] = 2 * best + 1 - p
            out[cnt, 3] = good
            cnt += 1
    return out[:cnt]


@njit(cache=True)
def _rowpair_count(t, cr, cc, dv, w):
    """Mismatching half-turn pairs between rows (cr-dv)/2 and (cr+dv)/2 within width w."""
    u = (cr - dv) // 2
    b = (cr + dv) // 2
    lo = (cc - w + 1) // 2
    total = 0
    for j in range(lo, lo + w):
        jj = cc - j
        if dv == 0 and j >= jj:
            continue
        if t[u, j] != t[b, jj]:
            total += 1
    return total


@njit(cache=True)
def _brute_rect(t, k):
    n, m = t.shape
    cap = 1024
    out = np.empty((cap, 5), np.int64)
    cnt = 0
    for cr in range(2 * n - 1):
        for cc in range(2 * m - 1):
            pr = cr & 1
            pc = cc & 1
            hmax = min(cr, 2 * n - 2 - cr) + 1
            wmax = min(cc, 2 * m - 2 - cc) + 1
            nw = (wmax - pc + 1) // 2
            nh = (hmax - pr + 1) // 2
            # counts[a, b] = mismatches of the block of width 2a+1+pc, height 2b+1+pr
            counts = np.empty((nw, nh), np.int64)
            for a in range(nw):
                w = 2 * a + 1 + pc
                acc = 0
                for b in range(nh):
                    acc += _rowpair_count(t, cr, cc, 2 * b + pr, w)
                    counts[a, b] = acc
            for a in range(nw - 1, -1, -1):
                for b in range(nh):
                    c = counts[a, b]
                    if c > k:
                        continue
                    if a + 1 < nw and counts[a + 1, b] <= k:
                        continue
                    if b + 1 < nh and counts[a, b + 1] <= k:
                        continue
                    if cnt == cap:
                        bigger = np.empty((2 * cap, 5), np.int64)
                        bigger[:cap] = out
                        out = bigger
                        cap *= 2
                    out[cnt, 0] = cr
                    out[cnt, 1] = cc
                    out[cnt, 2] = 2 * a + 1 + pc
                    out[cnt, 3] = 2 * b + 1 + pr
                    out[cnt, 4] = c
                    cnt += 1
    return out[:cnt]


def brute_sq_maximal(g: Grid, k: int) -> SqResults:
    """Largest square with at most ``k`` mismatches at every productive square center."""
    if k < 0:
        raise ValueError("k must be non-negative")
    rec = _brute_sq(g.cells, k)
    return SqResults(rec[:, 0], rec[:, 1], rec[:, 2], rec[:, 3])


def brute_rect_maximal(g: Grid, k: int) -> RectResults:
    """Per-center Pareto frontier of rectangles with at most ``k`` mismatches."""
    if k < 0:
        raise ValueError("k must be non-negative")
    rec = _brute_rect(g.cells, k)
    return RectResults(rec[:, 0], rec[:, 1], rec[:, 2], rec[:, 3], rec[:, 4])
