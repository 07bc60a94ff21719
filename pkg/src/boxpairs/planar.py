"""Output-sensitive reporting of intersecting rectangle pairs inside a query
rectangle.

A reported pair ``(S_i, S_j)`` meets the query in one of five ways:

* C1: one of the two contains the query;
* C2: a stretch of one has an endpoint inside the query and the other
  meets the part of that stretch inside the query;
* C3: a vertical stretch of one and a horizontal stretch of the other both
  span the query;
* C4: a corner of the query lies in ``S_i & S_j``;
* C5: ``S_i & S_j`` and the query cross like a plus sign.

Each routine only emits the pairs whose highest-priority way is its own, so
the routines partition the output.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence

from .counters import Work
from .geometry import Box, PairReport, Stretch, Tag, UsageError
from .slabtree import SlabTree
from .stretches import compute_stretches
from .substructures import (EndpointEnclosure, EndpointRange, PointEnclosure, RectIntersection,
                            SegmentWalk, StretchCrossing)


class PlanarStructure:
    """Static structure over a set of rectangles (2-D boxes)."""

    def __init__(self, boxes: Sequence[Box]) -> None:
        for b in boxes:
            if b.d != 2:
                raise UsageError("planar structure needs 2-D boxes, got d=%d" % b.d)
        self.boxes = list(boxes)
        self.ids = [b.id for b in boxes]
        if len(set(self.ids)) != len(self.ids):
            raise UsageError("box ids must be unique")
        self.n = n = len(boxes)
        pos = {b.id: t for t, b in enumerate(boxes)}
        x0 = self.x0 = [b.lo[0] for b in boxes]
        y0 = self.y0 = [b.lo[1] for b in boxes]
        x1 = self.x1 = [b.hi[0] for b in boxes]
        y1 = self.y1 = [b.hi[1] for b in boxes]

        self.stretches: List[Stretch] = compute_stretches(boxes)
        self.stretch_pos = [pos[s.owner] for s in self.stretches]
        self.stretches_of: List[List[Stretch]] = [[] for _ in range(n)]
        self._st: List[List[tuple]] = [[] for _ in range(n)]
        for s, t in zip(self.stretches, self.stretch_pos):
            self.stretches_of[t].append(s)
            self._st[t].append((s.vertical, s.fixed, s.lo, s.hi) + s.endpoints()[0] + s.endpoints()[1])

        # one endpoint record per distinct end of every stretch
        self.ep_point: List[tuple] = []
        self.ep_stretch: List[int] = []
        self.ep_from_lo: List[bool] = []
        for k, s in enumerate(self.stretches):
            a, b = s.endpoints()
            self.ep_point.append(a)
            self.ep_stretch.append(k)
            self.ep_from_lo.append(True)
            if b != a:
                self.ep_point.append(b)
                self.ep_stretch.append(k)
                self.ep_from_lo.append(False)

        self.ptenc = PointEnclosure(x0, y0, x1, y1)
        self.eptenc = EndpointEnclosure(self.ptenc, self.ep_point)
        self.segwalk = SegmentWalk(x0, y0, x1, y1, self.stretches)
        self.recenc = EndpointRange(self.ep_point)
        self.cross_v = StretchCrossing(self.stretches, True)
        self.cross_h = StretchCrossing(self.stretches, False)
        self.recint = RectIntersection(x0, y0, x1, y1, self.ptenc)
        self.xtree = SlabTree(x0, y0, x1, y1)
        self.ytree = SlabTree(y0, x0, y1, x1)

    # -- statistics -------------------------------------------------------------------

    def stats(self) -> Dict[str, int]:
        return {
            "n": self.n,
            "stretches": len(self.stretches),
            "endpoints": len(self.ep_point),
            "tree_memberships": self.xtree.memberships + self.ytree.memberships,
            "xtree_memberships": self.xtree.memberships,
            "ytree_memberships": self.ytree.memberships,
            "ptenc": self.ptenc.cells,
            "eptenc": self.eptenc.cells,
            "segint": self.segwalk.cells,
            "recenc": self.recenc.cells,
            "reccross": self.cross_v.cells + self.cross_h.cells,
            "recint": self.recint.cells,
            "xtree": self.xtree.cells,
            "ytree": self.ytree.cells,
        }

    def total_cells(self) -> int:
        s = self.stats()
        return sum(s[k] for k in ("ptenc", "eptenc", "segint", "recenc", "reccross", "recint",
                                  "xtree", "ytree"))

    # -- priority tag -----------------------------------------------------------------

    def tag(self, a: int, b: int, q: Box) -> Tag:
        """Highest-priority configuration of positions ``a``, ``b`` with ``q``.

        Same predicates as :func:`boxpairs.geometry.config_membership`, on
        the precomputed coordinates."""
        x0, y0, x1, y1 = self.x0, self.y0, self.x1, self.y1
        (qx0, qy0), (qx1, qy1) = q.lo, q.hi
        for t in (a, b):
            if x0[t] <= qx0 and qx1 <= x1[t] and y0[t] <= qy0 and qy1 <= y1[t]:
                return Tag.C1
        ix0 = x0[a] if x0[a] > x0[b] else x0[b]
        iy0 = y0[a] if y0[a] > y0[b] else y0[b]
        ix1 = x1[a] if x1[a] < x1[b] else x1[b]
        iy1 = y1[a] if y1[a] < y1[b] else y1[b]
        va = ha = vb = hb = False
        for t, o in ((a, b), (b, a)):
            ox0, oy0, ox1, oy1 = x0[o], y0[o], x1[o], y1[o]
            for vert, fixed, lo, hi, ex, ey, fx, fy in self._st[t]:
                if ((qx0 <= ex <= qx1 and qy0 <= ey <= qy1) or (qx0 <= fx <= qx1 and qy0 <= fy <= qy1)) \
                        and max(ex, qx0, ox0) <= min(fx, qx1, ox1) and max(ey, qy0, oy0) <= min(fy, qy1, oy1):
                    return Tag.C2
                if vert:
                    if qx0 <= fixed <= qx1 and lo <= qy0 and hi >= qy1:
                        if t == a:
                            va = True
                        else:
                            vb = True
                elif qy0 <= fixed <= qy1 and lo <= qx0 and hi >= qx1:
                    if t == a:
                        ha = True
                    else:
                        hb = True
        if (va and hb) or (vb and ha):
            return Tag.C3
        if (ix0 <= qx0 <= ix1 or ix0 <= qx1 <= ix1) and (iy0 <= qy0 <= iy1 or iy0 <= qy1 <= iy1):
            return Tag.C4
        x_wide = ix0 <= qx0 and qx1 <= ix1
        y_wide = iy0 <= qy0 and qy1 <= iy1
        x_narrow = qx0 <= ix0 and ix1 <= qx1
        y_narrow = qy0 <= iy0 and iy1 <= qy1
        if (x_wide and y_narrow) or (x_narrow and y_wide):
            return Tag.C5
        raise AssertionError("no configuration for pair (%d, %d)" % (self.ids[a], self.ids[b]))

    def _meets(self, a: int, b: int, q: Box) -> bool:
        x0, y0, x1, y1 = self.x0, self.y0, self.x1, self.y1
        (qx0, qy0), (qx1, qy1) = q.lo, q.hi
        return (max(x0[a], x0[b], qx0) <= min(x1[a], x1[b], qx1)
                and max(y0[a], y0[b], qy0) <= min(y1[a], y1[b], qy1))

    # -- the five routines ------------------------------------------------------------

    def _emit(self, a: int, b: int, want: Tag, q: Box, seen: set, out: list, work: Work) -> None:
        if a == b:
            return
        key = (a, b) if a < b else (b, a)
        if key in seen:
            return
        work.candidates += 1
        if self.tag(a, b, q) != want:
            return
        seen.add(key)
        i, j = self.ids[a], self.ids[b]
        out.append(PairReport(min(i, j), max(i, j), want))

    def report_c1(self, q: Box, work: Work, seen: set, out: list) -> None:
        inner = set(self.ptenc.report(q.lo, work))
        if not inner:
            return
        s1 = [t for t in self.ptenc.report(q.hi, work) if t in inner]
        if not s1:
            return
        s2 = self.recint.report(q.lo[0], q.lo[1], q.hi[0], q.hi[1], work)
        for a in s1:
            for b in s2:
                self._emit(a, b, Tag.C1, q, seen, out, work)

    def report_c2(self, q: Box, work: Work, seen: set, out: list) -> None:
        (qx0, qy0), (qx1, qy1) = q.lo, q.hi
        for e in self.recenc.report(qx0, qy0, qx1, qy1, work):
            k = self.ep_stretch[e]
            owner = self.stretch_pos[k]
            s = self.stretches[k]
            for b in self.eptenc.enumerate(e, work):
                self._emit(owner, b, Tag.C2, q, seen, out, work)
            lo, hi = (qy0, qy1) if s.vertical else (qx0, qx1)
            for _, b, _ in self.segwalk.walk(k, self.ep_from_lo[e], lo, hi, work):
                self._emit(owner, b, Tag.C2, q, seen, out, work)

    def report_c3(self, q: Box, work: Work, seen: set, out: list) -> None:
        (qx0, qy0), (qx1, qy1) = q.lo, q.hi
        if not (self.cross_v.any(qx0, qy0, qx1, qy1, work) and self.cross_h.any(qx0, qy0, qx1, qy1, work)):
            return
        sp = self.stretch_pos
        vs = list(dict.fromkeys(sp[k] for k in self.cross_v.report(qx0, qy0, qx1, qy1, work)))
        hs = list(dict.fromkeys(sp[k] for k in self.cross_h.report(qx0, qy0, qx1, qy1, work)))
        for a in vs:
            for b in hs:
                self._emit(a, b, Tag.C3, q, seen, out, work)

    def report_c4(self, q: Box, work: Work, seen: set, out: list) -> None:
        (qx0, qy0), (qx1, qy1) = q.lo, q.hi
        for c in dict.fromkeys(((qx0, qy0), (qx0, qy1), (qx1, qy0), (qx1, qy1))):
            s = self.ptenc.report(c, work)
            for u in range(len(s)):
                for w in range(u + 1, len(s)):
                    self._emit(s[u], s[w], Tag.C4, q, seen, out, work)

    def report_c5(self, q: Box, work: Work, seen: set, out: list) -> None:
        (qx0, qy0), (qx1, qy1) = q.lo, q.hi
        for tree, args in ((self.xtree, (qx0, qy0, qy1)), (self.ytree, (qy0, qx0, qx1))):
            for a, b in tree.candidate_pairs(*args, work):
                if self._meets(a, b, q):
                    self._emit(a, b, Tag.C5, q, seen, out, work)

    def query(self, q: Box, work: Optional[Work] = None) -> List[PairReport]:
        """All pairs whose intersection meets ``q``, each once, sorted."""
        if q.d != 2:
            raise UsageError("query must be 2-D")
        if work is None:
            work = Work()
        out: List[PairReport] = []
        seen: set = set()
        self.report_c1(q, work, seen, out)
        self.report_c2(q, work, seen, out)
        self.report_c3(q, work, seen, out)
        self.report_c4(q, work, seen, out)
        self.report_c5(q, work, seen, out)
        out.sort()
        return out


def query_planar(structure: PlanarStructure, q: Box, work: Optional[Work] = None) -> List[PairReport]:
    return structure.query(q, work)
