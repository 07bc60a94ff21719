"""Auxiliary planar query structures: point enclosure with precomputed
entries, ordered walks along stretches, endpoint range reporting,
stretch crossing and rectangle intersection.

Rectangles are passed as four parallel sequences ``x0, y0, x1, y1`` indexed
by position; payloads are positions unless stated otherwise.
"""

from __future__ import annotations

from typing import List, Optional, Sequence

from .counters import Work
from .geometry import Stretch, UsageError
from .persistent import PersistentList
from .search import CrossingStructure, Enclosure, RangeTree2D


class PointEnclosure:
    """Rectangles containing a query point (closed)."""

    def __init__(self, x0, y0, x1, y1) -> None:
        n = len(x0)
        self.enc = Enclosure([(x0[t], y0[t]) for t in range(n)],
                             [(x1[t], y1[t]) for t in range(n)], list(range(n)))

    @property
    def cells(self) -> int:
        return self.enc.cells

    def report(self, p, work: Work) -> List[int]:
        return self.enc.report(p, work)

    def any(self, p, work: Work) -> bool:
        return self.enc.any(p, work)


class EndpointEnclosure:
    """Answers for a fixed set of points, stored as nonempty entry pointers
    into a :class:`PointEnclosure` so that enumeration costs O(1 + K)."""

    def __init__(self, ptenc: PointEnclosure, points: Sequence[tuple]) -> None:
        scratch = Work()
        self.entries = [ptenc.enc.entries(p, scratch) for p in points]

    @property
    def cells(self) -> int:
        return sum(len(e) for e in self.entries)

    def enumerate(self, e: int, work: Work) -> List[int]:
        if not 0 <= e < len(self.entries):
            raise UsageError("unknown endpoint %d" % e)
        out = []
        for pays, c in self.entries[e]:
            work.steps += c
            out.extend(pays[:c])
        return out


class SegmentWalk:
    """Ordered walk along stretches over the orthogonal rectangle sides.

    For vertical stretches the horizontal sides are swept over x into a
    persistent list sorted by y (plus a mirrored copy sorted by -y); every
    stretch endpoint gets its entry version and node at build time.
    Horizontal stretches are handled with the axes exchanged.
    """

    def __init__(self, x0, y0, x1, y1, stretches: Sequence[Stretch]) -> None:
        n = len(x0)
        horiz = []   # sides orthogonal to vertical stretches: alive over x, key y
        vert = []
        for t in range(n):
            horiz.append((x0[t], x1[t], y1[t], t, 0))
            horiz.append((x0[t], x1[t], y0[t], t, 1))
            vert.append((y0[t], y1[t], x0[t], t, 2))
            vert.append((y0[t], y1[t], x1[t], t, 3))
        self.stretches = list(stretches)
        probes_v_up, probes_v_dn, probes_h_up, probes_h_dn = [], [], [], []
        self._where = []
        for s in self.stretches:
            if s.vertical:
                self._where.append((len(probes_v_up), True))
                probes_v_up.append((s.fixed, (s.lo,)))
                probes_v_dn.append((s.fixed, (-s.hi,)))
            else:
                self._where.append((len(probes_h_up), False))
                probes_h_up.append((s.fixed, (s.lo,)))
                probes_h_dn.append((s.fixed, (-s.hi,)))

        def lists(sides, up, dn):
            a = PersistentList([(lo, hi, (pos, own, code), own) for lo, hi, pos, own, code in sides], up)
            b = PersistentList([(lo, hi, (-pos, own, code), own) for lo, hi, pos, own, code in sides], dn)
            return a, b

        self.v_up, self.v_dn = lists(horiz, probes_v_up, probes_v_dn)
        self.h_up, self.h_dn = lists(vert, probes_h_up, probes_h_dn)

    @property
    def cells(self) -> int:
        return self.v_up.count + self.v_dn.count + self.h_up.count + self.h_dn.count

    def walk(self, k: int, from_lo: bool, q_lo: int, q_hi: int, work: Work) -> List[tuple]:
        """Sides crossed by stretch ``k`` inside ``[q_lo, q_hi]`` (the range of
        the query along the stretch), in order from the chosen endpoint.
        Returns ``(position, owner, side_code)`` tuples."""
        s = self.stretches[k]
        start = s.lo if from_lo else s.hi
        if not q_lo <= start <= q_hi:
            raise UsageError("walk must start at an endpoint inside the query")
        idx, vertical = self._where[k]
        out = []
        if from_lo:
            pl = self.v_up if vertical else self.h_up
            limit = min(s.hi, q_hi)
            ver, node = pl.entry(idx)
            if ver < 0:
                return out
            for key, _ in pl.walk(ver, node, work):
                if key[0] > limit:
                    break
                out.append(key)
        else:
            pl = self.v_dn if vertical else self.h_dn
            limit = max(s.lo, q_lo)
            ver, node = pl.entry(idx)
            if ver < 0:
                return out
            for key, _ in pl.walk(ver, node, work):
                if -key[0] < limit:
                    break
                out.append((-key[0], key[1], key[2]))
        return out


class EndpointRange:
    """Stretch endpoints inside a closed query rectangle."""

    def __init__(self, points: Sequence[tuple]) -> None:
        self.tree = RangeTree2D([p[0] for p in points], [p[1] for p in points], list(range(len(points))))

    @property
    def cells(self) -> int:
        return self.tree.cells

    def report(self, x0: int, y0: int, x1: int, y1: int, work: Work) -> List[int]:
        return self.tree.query(x0, x1, y0, y1, work)


class StretchCrossing:
    """Stretches of one orientation crossing a query rectangle: a vertical
    stretch ``x * [a, b]`` crosses ``[x0,x1]*[y0,y1]`` iff ``x0 <= x <= x1``,
    ``a <= y0`` and ``b >= y1``."""

    def __init__(self, stretches: Sequence[Stretch], vertical: bool) -> None:
        self.vertical = vertical
        idx = [k for k, s in enumerate(stretches) if s.vertical == vertical]
        self.cs = CrossingStructure([stretches[k].fixed for k in idx], [stretches[k].lo for k in idx],
                                    [stretches[k].hi for k in idx], idx)

    @property
    def cells(self) -> int:
        return self.cs.cells

    def _args(self, x0, y0, x1, y1):
        if self.vertical:
            return x0, x1, y0, y1
        return y0, y1, x0, x1

    def report(self, x0: int, y0: int, x1: int, y1: int, work: Work) -> List[int]:
        return self.cs.query(*self._args(x0, y0, x1, y1), work)

    def any(self, x0: int, y0: int, x1: int, y1: int, work: Work) -> bool:
        return self.cs.any(*self._args(x0, y0, x1, y1), work)


class RectIntersection:
    """Rectangles meeting a query rectangle: one of their sides crosses it,
    one of their corners lies in it, or they contain its lower-left corner."""

    def __init__(self, x0, y0, x1, y1, ptenc: Optional[PointEnclosure] = None) -> None:
        n = len(x0)
        self.n = n
        self.vsides = CrossingStructure(list(x0) + list(x1), list(y0) * 2, list(y1) * 2, list(range(n)) * 2)
        self.hsides = CrossingStructure(list(y0) + list(y1), list(x0) * 2, list(x1) * 2, list(range(n)) * 2)
        cx = list(x0) + list(x0) + list(x1) + list(x1)
        cy = list(y0) + list(y1) + list(y0) + list(y1)
        self.corners = RangeTree2D(cx, cy, list(range(n)) * 4)
        self.ptenc = ptenc if ptenc is not None else PointEnclosure(x0, y0, x1, y1)

    @property
    def cells(self) -> int:
        return self.vsides.cells + self.hsides.cells + self.corners.cells

    def report(self, x0: int, y0: int, x1: int, y1: int, work: Work) -> List[int]:
        found = []
        self.vsides.query(x0, x1, y0, y1, work, found)
        self.hsides.query(y0, y1, x0, x1, work, found)
        self.corners.query(x0, x1, y0, y1, work, found)
        self.ptenc.enc.report((x0, y0), work, found)
        return list(dict.fromkeys(found))

    def any(self, x0: int, y0: int, x1: int, y1: int, work: Work) -> bool:
        return (self.vsides.any(x0, x1, y0, y1, work) or self.hsides.any(y0, y1, x0, x1, work)
                or bool(self.corners.query(x0, x1, y0, y1, work, first=True))
                or self.ptenc.any((x0, y0), work))
