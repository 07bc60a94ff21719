"""Stretch computation for the sides of planar rectangles.

For a side ``ab`` of a rectangle, the stretch runs between the points of
``ab`` that are covered by some other rectangle and lie closest to ``a``
and ``b``.  Computed with a plane sweep over the side's fixed coordinate.
"""

from __future__ import annotations

from bisect import bisect_left
from typing import List, Sequence

from .geometry import BOTTOM, LEFT, RIGHT, TOP, Box, Stretch

_INF = float("inf")


class _MinTree:
    __slots__ = ("size", "t")

    def __init__(self, n: int) -> None:
        size = 1
        while size < max(n, 1):
            size <<= 1
        self.size = size
        self.t = [_INF] * (2 * size)

    def set(self, i: int, v) -> None:
        t = self.t
        i += self.size
        t[i] = v
        i >>= 1
        while i:
            a, b = t[2 * i], t[2 * i + 1]
            t[i] = a if a < b else b
            i >>= 1

    def min(self, l: int, r: int):
        """Minimum over positions ``[l, r)``."""
        t = self.t
        res = _INF
        l += self.size
        r += self.size
        while l < r:
            if l & 1:
                if t[l] < res:
                    res = t[l]
                l += 1
            if r & 1:
                r -= 1
                if t[r] < res:
                    res = t[r]
            l >>= 1
            r >>= 1
        return res


def _sweep(x0, y0, x1, y1) -> List[tuple]:
    """Stretches of the horizontal sides, as ``(t, is_top, lo, hi)``."""
    n = len(x0)
    by_x1 = sorted(range(n), key=lambda t: (x1[t], t))
    by_x0 = sorted(range(n), key=lambda t: (x0[t], t))
    rank1 = [0] * n
    rank0 = [0] * n
    for r, t in enumerate(by_x0):
        rank0[t] = r
    for r, t in enumerate(by_x1):
        rank1[t] = r
    keys1 = [x1[t] for t in by_x1]
    keys0 = [x0[t] for t in by_x0]
    lo_tree = _MinTree(n)   # at rank of x1: x0 of active rectangles
    hi_tree = _MinTree(n)   # at rank of x0: -x1 of active rectangles
    starts, ends = {}, {}
    for t in range(n):
        starts.setdefault(y0[t], []).append(t)
        ends.setdefault(y1[t], []).append(t)
    out = []
    for c in sorted(set(starts) | set(ends)):
        for t in starts.get(c, ()):
            lo_tree.set(rank1[t], x0[t])
            hi_tree.set(rank0[t], -x1[t])
        probe = [(t, False) for t in starts.get(c, ())] + [(t, True) for t in ends.get(c, ())]
        for t, is_top in probe:
            xa, xb = x0[t], x1[t]
            lo_tree.set(rank1[t], _INF)
            hi_tree.set(rank0[t], _INF)
            m = lo_tree.min(bisect_left(keys1, xa), n)
            if m <= xb:
                big = -hi_tree.min(0, bisect_left(keys0, xb + 1))
                out.append((t, is_top, max(xa, m), min(xb, big)))
            lo_tree.set(rank1[t], x0[t])
            hi_tree.set(rank0[t], -x1[t])
        for t in ends.get(c, ()):
            lo_tree.set(rank1[t], _INF)
            hi_tree.set(rank0[t], _INF)
    return out


def compute_stretches(boxes: Sequence[Box]) -> List[Stretch]:
    """All stretches, ordered by (owner id, side)."""
    x0 = [b.lo[0] for b in boxes]
    y0 = [b.lo[1] for b in boxes]
    x1 = [b.hi[0] for b in boxes]
    y1 = [b.hi[1] for b in boxes]
    found = []
    for t, is_top, lo, hi in _sweep(x0, y0, x1, y1):
        side = TOP if is_top else BOTTOM
        found.append(Stretch(boxes[t].id, side, y1[t] if is_top else y0[t], lo, hi))
    for t, is_right, lo, hi in _sweep(y0, x0, y1, x1):
        side = RIGHT if is_right else LEFT
        found.append(Stretch(boxes[t].id, side, x1[t] if is_right else x0[t], lo, hi))
    order = {TOP: 0, BOTTOM: 1, LEFT: 2, RIGHT: 3}
    found.sort(key=lambda s: (s.owner, order[s.side]))
    return found
