"""Exact-integer box primitives, the pair data model and the planar
configuration predicates used to deduplicate reports."""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Optional, Sequence


class UsageError(ValueError):
    """Raised when an operation is called outside its preconditions."""


class Tag(IntEnum):
    C1 = 1
    C2 = 2
    C3 = 3
    C4 = 4
    C5 = 5
    HD_CASE1 = 6
    HD_CASE2 = 7


@dataclass(frozen=True)
class Box:
    """Closed axis-parallel box ``[lo[0], hi[0]] x ... x [lo[d-1], hi[d-1]]``."""

    id: int
    lo: tuple
    hi: tuple

    def __post_init__(self) -> None:
        if len(self.lo) != len(self.hi):
            raise UsageError("lo/hi dimension mismatch")
        for a, b in zip(self.lo, self.hi):
            if type(a) is not int or type(b) is not int:
                raise UsageError("coordinates must be integers, got %r" % ((a, b),))
            if a > b:
                raise UsageError("box %d has lo > hi" % self.id)

    @property
    def d(self) -> int:
        return len(self.lo)

    @classmethod
    def of(cls, id: int, lo: Sequence[int], hi: Sequence[int]) -> "Box":
        return cls(id, tuple(lo), tuple(hi))

    def contains_point(self, p: Sequence[int]) -> bool:
        return all(a <= x <= b for a, x, b in zip(self.lo, p, self.hi))

    def contains_box(self, other: "Box") -> bool:
        return all(a <= c and d <= b for a, b, c, d in zip(self.lo, self.hi, other.lo, other.hi))

    def drop_axis(self, t: int) -> "Box":
        return Box(self.id, self.lo[:t] + self.lo[t + 1:], self.hi[:t] + self.hi[t + 1:])


@dataclass(frozen=True, order=True)
class PairReport:
    i: int
    j: int
    tag: Tag

    def __post_init__(self) -> None:
        if not self.i < self.j:
            raise UsageError("PairReport needs i < j, got (%d, %d)" % (self.i, self.j))

    @property
    def pair(self) -> tuple:
        return (self.i, self.j)


def ordered(a: int, b: int) -> tuple:
    return (a, b) if a < b else (b, a)


def _same_dim(a: Box, b: Box) -> None:
    if len(a.lo) != len(b.lo):
        raise UsageError("dimension mismatch: %d vs %d" % (len(a.lo), len(b.lo)))


def intersect_boxes(a: Box, b: Box, id: int = -1) -> Optional[Box]:
    _same_dim(a, b)
    lo = tuple(max(x, y) for x, y in zip(a.lo, b.lo))
    hi = tuple(min(x, y) for x, y in zip(a.hi, b.hi))
    for x, y in zip(lo, hi):
        if x > y:
            return None
    return Box(id, lo, hi)


def boxes_intersect(a: Box, b: Box) -> bool:
    _same_dim(a, b)
    for alo, ahi, blo, bhi in zip(a.lo, a.hi, b.lo, b.hi):
        if alo > bhi or blo > ahi:
            return False
    return True


def triple_intersects(a: Box, b: Box, q: Box) -> bool:
    _same_dim(a, b)
    _same_dim(a, q)
    for t in range(len(a.lo)):
        if max(a.lo[t], b.lo[t], q.lo[t]) > min(a.hi[t], b.hi[t], q.hi[t]):
            return False
    return True


# -- stretches ---------------------------------------------------------------

TOP, BOTTOM, LEFT, RIGHT = "top", "bottom", "left", "right"
SIDES = (TOP, BOTTOM, LEFT, RIGHT)


@dataclass(frozen=True)
class Stretch:
    """Sub-segment ``[lo, hi]`` of one side of box ``owner``.

    ``fixed`` is the side's constant coordinate: x for left/right sides,
    y for top/bottom sides.  ``lo``/``hi`` run along the other axis.
    """

    owner: int
    side: str
    fixed: int
    lo: int
    hi: int

    @property
    def vertical(self) -> bool:
        return self.side in (LEFT, RIGHT)

    def endpoints(self) -> tuple:
        if self.vertical:
            return ((self.fixed, self.lo), (self.fixed, self.hi))
        return ((self.lo, self.fixed), (self.hi, self.fixed))

    def crosses(self, q: Box) -> bool:
        """Crossing in the C3 sense: the stretch spans q from side to side."""
        if self.vertical:
            return q.lo[0] <= self.fixed <= q.hi[0] and self.lo <= q.lo[1] and self.hi >= q.hi[1]
        return q.lo[1] <= self.fixed <= q.hi[1] and self.lo <= q.lo[0] and self.hi >= q.hi[0]


def side_segment(b: Box, side: str) -> tuple:
    """(fixed, lo, hi) of a side of a 2-D box."""
    (x0, y0), (x1, y1) = b.lo, b.hi
    if side == TOP:
        return (y1, x0, x1)
    if side == BOTTOM:
        return (y0, x0, x1)
    if side == LEFT:
        return (x0, y0, y1)
    return (x1, y0, y1)


# -- configuration membership (d = 2) -----------------------------------------

def _in(p: Sequence[int], q: Box) -> bool:
    return q.lo[0] <= p[0] <= q.hi[0] and q.lo[1] <= p[1] <= q.hi[1]


def _reaches(s: Stretch, other: Box, q: Box) -> bool:
    """An endpoint of ``s`` lies in ``q`` and ``other`` meets ``s & q``."""
    a, b = s.endpoints()
    if not (_in(a, q) or _in(b, q)):
        return False
    for t in (0, 1):
        if max(a[t], q.lo[t], other.lo[t]) > min(b[t], q.hi[t], other.hi[t]):
            return False
    return True


def c2_literal(si: Box, sj: Box, stretches_i: Iterable[Stretch],
               stretches_j: Iterable[Stretch], q: Box) -> bool:
    """Narrow reading of C2: a stretch endpoint in ``q`` that is itself a
    corner of ``si & sj``.  Not exhaustive together with C1, C3-C5; kept
    for comparison only."""
    inter = intersect_boxes(si, sj)
    if inter is None:
        return False
    (ix0, iy0), (ix1, iy1) = inter.lo, inter.hi
    corners = {(ix0, iy0), (ix0, iy1), (ix1, iy0), (ix1, iy1)}
    for group in (stretches_i, stretches_j):
        for s in group:
            for e in s.endpoints():
                if e in corners and _in(e, q):
                    return True
    return False


def config_membership(si: Box, sj: Box, stretches_i: Iterable[Stretch],
                      stretches_j: Iterable[Stretch], q: Box) -> frozenset:
    """Every configuration C1..C5 that the triple (si, sj, q) belongs to.

    C2 holds when a stretch of one rectangle has an endpoint in ``q`` and
    the other rectangle meets the part of that stretch inside ``q``.
    """
    if si.d != 2 or sj.d != 2 or q.d != 2:
        raise UsageError("configurations are defined for d = 2 only")
    inter = intersect_boxes(si, sj)
    if inter is None or not boxes_intersect(inter, q):
        raise UsageError("pair does not meet the query")
    out = set()
    if si.contains_box(q) or sj.contains_box(q):
        out.add(Tag.C1)

    (ix0, iy0), (ix1, iy1) = inter.lo, inter.hi
    vert_i = horiz_i = vert_j = horiz_j = False
    for group, is_i in ((stretches_i, True), (stretches_j, False)):
        other = sj if is_i else si
        for s in group:
            if _reaches(s, other, q):
                out.add(Tag.C2)
            if s.crosses(q):
                if s.vertical:
                    if is_i:
                        vert_i = True
                    else:
                        vert_j = True
                elif is_i:
                    horiz_i = True
                else:
                    horiz_j = True
    if (vert_i and horiz_j) or (vert_j and horiz_i):
        out.add(Tag.C3)

    (qx0, qy0), (qx1, qy1) = q.lo, q.hi
    for c in ((qx0, qy0), (qx0, qy1), (qx1, qy0), (qx1, qy1)):
        if ix0 <= c[0] <= ix1 and iy0 <= c[1] <= iy1:
            out.add(Tag.C4)
            break

    x_wide = ix0 <= qx0 and qx1 <= ix1
    y_wide = iy0 <= qy0 and qy1 <= iy1
    x_narrow = qx0 <= ix0 and ix1 <= qx1
    y_narrow = qy0 <= iy0 and iy1 <= qy1
    if (x_wide and y_narrow) or (x_narrow and y_wide):
        out.add(Tag.C5)
    return frozenset(out)


def dedup_tag(si: Box, sj: Box, stretches_i: Iterable[Stretch],
              stretches_j: Iterable[Stretch], q: Box) -> Tag:
    """Highest-priority configuration of the triple; C1 beats C2 beats ... C5."""
    members = config_membership(si, sj, stretches_i, stretches_j, q)
    if not members:
        # Exhaustiveness of the five configurations failed for this triple.
        raise AssertionError("no configuration for pair (%d, %d)" % (si.id, sj.id))
    return min(members)


def priority_tag(members: Iterable[Tag]) -> Tag:
    return min(members)
