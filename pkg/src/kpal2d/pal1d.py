"""Maximal k-mismatch palindromes around one center of a 1D sequence."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .lce import LceIndex


@dataclass(frozen=True)
class Pal1dResult:
    arm: int
    # distances (1 = innermost pair) of mismatching pairs, at most k + 1
    mismatch_dists: tuple[int, ...]

    def length(self, center: int) -> int:
        return 2 * self.arm + (1 - center % 2)


def arm_starts(center: int) -> tuple[int, int]:
    """First cell of the right arm and of the left arm for a doubled center."""
    return center // 2 + 1, (center + 1) // 2 - 1


def maximal_pal_1d(ix: LceIndex, seq: int, center: int, k: int) -> Pal1dResult:
    """Kangaroo the right arm against the reversed left arm.

    ``ix`` must hold ``seq`` together with its reverse (see
    ``LceIndex.build(..., with_reverses=True)``).  An even ``center`` sits
    on a cell, which matches itself.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    length = ix.lengths[seq]
    if not 0 <= center <= 2 * length - 2:
        raise IndexError(f"center {center} outside a sequence of length {length}")
    rev = ix.reverse_id(seq)
    right, left = arm_starts(center)
    limit = min(length - right, left + 1)
    arm, offsets = ix.kangaroo((seq, right), (rev, length - 1 - left), limit, k)
    return Pal1dResult(arm, tuple(o + 1 for o in offsets))


def naive_pal_1d(s: Sequence[int], center: int, k: int) -> Pal1dResult:
    right, left = arm_starts(center)
    dists = []
    arm = 0
    while right + arm < len(s) and left - arm >= 0:
        if s[right + arm] != s[left - arm]:
            dists.append(arm + 1)
            if len(dists) > k:
                break
        arm += 1
    return Pal1dResult(arm, tuple(dists))
