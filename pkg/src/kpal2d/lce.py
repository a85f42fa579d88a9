"""Longest-common-extension queries over collections of integer sequences.

The index is a suffix array (built with ``divsufsort``) of the concatenated collection (one unique
separator after each sequence), its inverse, the Kasai LCP array and a
block-decomposed sparse table for range minima.  A query is two rank
lookups plus one range-minimum, so its cost does not depend on the answer.

The jitted kernels work on *stacked* tables: several texts of identical
length share one set of 2D/3D arrays, addressed by a ``level`` row.  The
square and rectangle searches keep one row per name width; the generic
:class:`LceIndex` simply uses a single row.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from numba import njit
from pydivsufsort import divsufsort

BLOCK_SHIFT = 5
BLOCK = 1 << BLOCK_SHIFT
# returned for a position compared with itself; callers always clamp
UNBOUNDED = 1 << 30


class LceTables(NamedTuple):
    """Stacked query tables; row ``level`` of each array belongs to one text."""

    rank: np.ndarray    # (L, N) int32, inverse suffix array
    lcp: np.ndarray     # (L, N) lcp[r] = lcp(sa[r-1], sa[r])
    pmin: np.ndarray    # (L, N) prefix minima inside each block
    smin: np.ndarray    # (L, N) suffix minima inside each block
    table: np.ndarray   # (L, J, nblocks) sparse table over block minima
    lg: np.ndarray      # floor(log2 x) for x <= nblocks

    @property
    def nbytes(self) -> int:
        return sum(a.nbytes for a in self)


@njit(cache=True)
def _fill_level(text, sa, rank, lcp, pmin, smin, table):
    """Kasai LCP plus the two-level range-minimum tables, written in place."""
    n = text.shape[0]
    for r in range(n):
        rank[sa[r]] = r
    h = 0
    for i in range(n):
        r = rank[i]
        if r == 0:
            lcp[0] = 0
            h = 0
            continue
        j = sa[r - 1]
        while i + h < n and j + h < n and text[i + h] == text[j + h]:
            h += 1
        lcp[r] = h
        if h > 0:
            h -= 1
    nblocks = table.shape[1]
    for b in range(nblocks):
        lo = b * BLOCK
        hi = min(lo + BLOCK, n)
        cur = lcp[lo]
        pmin[lo] = cur
        for x in range(lo + 1, hi):
            if lcp[x] < cur:
                cur = lcp[x]
            pmin[x] = cur
        table[0, b] = cur
        cur = lcp[hi - 1]
        smin[hi - 1] = cur
        for x in range(hi - 2, lo - 1, -1):
            if lcp[x] < cur:
                cur = lcp[x]
            smin[x] = cur
    for j in range(1, table.shape[0]):
        half = 1 << (j - 1)
        for b in range(nblocks - (1 << j) + 1):
            a = table[j - 1, b]
            c = table[j - 1, b + half]
            table[j, b] = a if a < c else c


@njit(cache=True)
def lce_query(ix, level, p, q):
    """Longest common extension of flat positions ``p`` and ``q``."""
    if p == q:
        return UNBOUNDED
    rank, lcp, pmin, smin, table, lg = ix
    a = rank[level, p]
    b = rank[level, q]
    if a > b:
        a, b = b, a
    lo = a + 1
    bl = lo >> BLOCK_SHIFT
    bh = b >> BLOCK_SHIFT
    if bl == bh:
        res = lcp[level, lo]
        for x in range(lo + 1, b + 1):
            v = lcp[level, x]
            if v < res:
                res = v
        return res
    res = smin[level, lo]
    v = pmin[level, b]
    if v < res:
        res = v
    if bh - bl > 1:
        x = bl + 1
        y = bh - 1
        j = lg[y - x + 1]
        v = table[level, j, x]
        if v < res:
            res = v
        v = table[level, j, y - (1 << j) + 1]
        if v < res:
            res = v
    return res


@njit(cache=True)
def kangaroo_flat(ix, level, pa, pb, limit, budget, offsets):
    """Kangaroo jumps from ``pa``/``pb``; returns (matched, mismatches, queries).

    Mismatch offsets go to ``offsets``; at most ``budget + 1`` are recorded.
    """
    t = 0
    found = 0
    queries = 0
    while t < limit:
        x = lce_query(ix, level, pa + t, pb + t)
        queries += 1
        t += x
        if t >= limit:
            break
        offsets[found] = t
        found += 1
        if found > budget:
            return t, found, queries
        t += 1
    return limit, found, queries


def build_tables(texts: Sequence[np.ndarray], lcp_bound: int) -> LceTables:
    """Build stacked tables for equally long non-negative ``texts``.

    ``lcp_bound`` is an upper bound on any true LCP value; it selects the
    narrowest integer type that can hold them.
    """
    levels = len(texts)
    n = len(texts[0]) if levels else 0
    dtype = np.int16 if lcp_bound < np.iinfo(np.int16).max else np.int32
    nblocks = max(1, (n + BLOCK - 1) // BLOCK)
    depth = max(1, nblocks.bit_length())
    rank = np.empty((levels, n), np.int32)
    lcp = np.empty((levels, n), dtype)
    pmin = np.empty((levels, n), dtype)
    smin = np.empty((levels, n), dtype)
    table = np.zeros((levels, depth, nblocks), dtype)
    lg = np.zeros(nblocks + 1, np.int8)
    for x in range(2, nblocks + 1):
        lg[x] = lg[x // 2] + 1
    for lev, text in enumerate(texts):
        if n == 0:
            continue
        text = np.ascontiguousarray(text, dtype=np.int32)
        sa = divsufsort(text)
        _fill_level(text, sa, rank[lev], lcp[lev], pmin[lev], smin[lev], table[lev])
    return LceTables(rank, lcp, pmin, smin, table, lg)


@dataclass
class LceIndex:
    """Constant-time LCP queries between (sequence id, offset) positions.

    >>> ix = LceIndex.build([[0, 1, 0, 1]])
    >>> ix.lcp((0, 0), (0, 2))
    2
    """

    lengths: tuple[int, ...]
    starts: np.ndarray
    tables: LceTables
    reverse_of: dict[int, int] = field(default_factory=dict)
    query_counter: int = 0

    @classmethod
    def build(cls, sequences: Sequence[Sequence[int]], with_reverses: bool = False) -> "LceIndex":
        seqs = [np.asarray(s, dtype=np.int64).ravel() for s in sequences]
        if not seqs:
            raise ValueError("cannot index an empty collection")
        for s in seqs:
            if s.size and s.min() < 0:
                raise ValueError("symbols must be non-negative integers")
        reverse_of = {}
        if with_reverses:
            base = len(seqs)
            seqs = seqs + [s[::-1].copy() for s in seqs]
            reverse_of = {i: base + i for i in range(base)}
        lengths = tuple(int(s.size) for s in seqs)
        starts = np.zeros(len(seqs), np.int64)
        starts[1:] = np.cumsum(np.asarray(lengths[:-1]) + 1)
        body = np.concatenate(seqs) if sum(lengths) else np.zeros(0, np.int64)
        _, dense = np.unique(body, return_inverse=True)
        sigma = int(dense.max()) + 1 if dense.size else 0
        text = np.empty(sum(lengths) + len(seqs), np.int32)
        pos = 0
        for sid, s in enumerate(seqs):
            text[pos:pos + s.size] = dense[pos - sid:pos - sid + s.size]
            pos += s.size
            text[pos] = sigma + sid  # unique separator
            pos += 1
        tables = build_tables([text], max(lengths) + 1)
        return cls(lengths, starts, tables, reverse_of)

    def reverse_id(self, seq: int) -> int:
        try:
            return self.reverse_of[seq]
        except KeyError:
            raise ValueError(f"sequence {seq} has no reversed copy in this index") from None

    def _flat(self, pos: tuple[int, int]) -> int:
        seq, off = pos
        if not 0 <= seq < len(self.lengths):
            raise IndexError(f"sequence id {seq} out of range")
        if not 0 <= off <= self.lengths[seq]:
            raise IndexError(f"offset {off} out of range for sequence {seq}")
        return int(self.starts[seq]) + off

    def remaining(self, pos: tuple[int, int]) -> int:
        return self.lengths[pos[0]] - pos[1]

    def lcp(self, a: tuple[int, int], b: tuple[int, int]) -> int:
        """Length of the longest common prefix of the suffixes at ``a`` and ``b``."""
        pa, pb = self._flat(a), self._flat(b)
        self.query_counter += 1
        if pa == pb:
            return self.remaining(a)
        return int(lce_query(self.tables, 0, pa, pb))

    def kangaroo(self, a, b, limit: int, budget: int) -> tuple[int, list[int]]:
        """Match ``limit`` symbols from ``a`` and ``b`` allowing ``budget`` mismatches.

        Returns the matched prefix length and the offsets of the first
        ``budget + 1`` mismatches (fewer if the prefix runs out first).
        """
        if budget < 0:
            raise ValueError("budget must be non-negative")
        if limit > min(self.remaining(a), self.remaining(b)):
            raise IndexError("limit exceeds the remaining length")
        pa, pb = self._flat(a), self._flat(b)
        offsets = np.empty(budget + 2, np.int64)
        if pa == pb:
            self.query_counter += 1 if limit else 0
            return limit, []
        matched, found, queries = kangaroo_flat(self.tables, 0, pa, pb, limit, budget, offsets)
        self.query_counter += int(queries)
        return int(matched), [int(x) for x in offsets[:found]]
