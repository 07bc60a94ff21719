"""Pair reporting for d >= 3 over a coarse grid.

Every axis is cut at every ``floor(n^(1-delta))``-th facet coordinate.  A
pair is charged to the grid cell holding the lower corner of its
intersection.  Cells inside the query are expanded pair by pair; the
remaining pairs touch one of the query's boundary slabs and are found there,
either through a box with a facet inside the slab or by recursing one
dimension down on the boxes that cross the slab.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .counters import Work
from .geometry import Box, PairReport, Tag, UsageError
from .planar import PlanarStructure
from .search import BIG, LEAF, NEG, Enclosure, RangeTree, block_range, canonical_nodes, pow2_at_least
from .substructures import RectIntersection

DEFAULT_DELTA = Fraction(1, 2)


def as_fraction(delta: Union[Fraction, float, str, int]) -> Fraction:
    if isinstance(delta, Fraction):
        return delta
    if isinstance(delta, str):
        return Fraction(delta)
    return Fraction(delta).limit_denominator(1000)


def check_delta(delta, d: int) -> Fraction:
    """``delta`` as a fraction, after checking ``1/d <= delta < 1``."""
    try:
        f = as_fraction(delta)
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError("bad delta %r" % (delta,)) from e
    if not (Fraction(1, d) <= f < 1):
        raise UsageError("delta must satisfy 1/d <= delta < 1, got %s for d=%d" % (f, d))
    return f


def grid_step(n: int, delta: Fraction) -> int:
    """``max(1, floor(n ** (1 - delta)))`` in exact arithmetic."""
    if n <= 1:
        return 1
    e = 1 - delta
    p, q = e.numerator, e.denominator
    target = n ** p
    s = int(round(n ** float(e)))
    while s > 0 and s ** q > target:
        s -= 1
    while (s + 1) ** q <= target:
        s += 1
    return max(1, s)


class GridAxis:
    """Chosen coordinates on one axis.

    Interval ``g`` runs from ``chosen[g-1]`` to ``chosen[g]``; interval 0 and
    interval ``len(chosen)`` are unbounded.  A coordinate equal to a chosen
    value belongs to the interval starting there.
    """

    def __init__(self, t: int, projections: Sequence[int], step: int) -> None:
        self.t = t
        self.step = step
        ps = sorted(projections)
        self.chosen = sorted(set(ps[step - 1::step]))
        self.intervals = len(self.chosen) + 1

    def interval_of(self, x: int) -> int:
        return bisect_right(self.chosen, x)

    def bounds(self, g: int) -> Tuple[int, int]:
        """Closed bounds of interval ``g``; unbounded ends become NEG/BIG."""
        c = self.chosen
        return (c[g - 1] if g > 0 else NEG, c[g] if g < len(c) else BIG)

    def inner_range(self, a: int, b: int) -> Tuple[int, int]:
        """Indices of the bounded intervals contained in ``[a, b]``."""
        return bisect_left(self.chosen, a) + 1, bisect_right(self.chosen, b) - 1


def build_grid(boxes: Sequence[Box], t: int, delta) -> GridAxis:
    d = boxes[0].d if boxes else 1
    f = check_delta(delta, max(d, 2))
    n = len(boxes)
    axis = GridAxis(t, [b.lo[t] for b in boxes] + [b.hi[t] for b in boxes], grid_step(n, f))
    slab_facets(boxes, axis)
    return axis


def slab_facets(boxes: Sequence[Box], axis: GridAxis) -> Dict[int, List[int]]:
    """Positions of boxes with a facet strictly inside each interval.

    Fails loudly if an interval holds more than ``2 * step`` facet
    coordinates."""
    c, t = axis.chosen, axis.t
    count: Dict[int, int] = {}
    found: Dict[int, List[int]] = {}
    for p, b in enumerate(boxes):
        for x in (b.lo[t], b.hi[t]):
            k = bisect_left(c, x)
            if k < len(c) and c[k] == x:
                continue
            count[k] = count.get(k, 0) + 1
            lst = found.setdefault(k, [])
            if not lst or lst[-1] != p:
                lst.append(p)
    for g, m in count.items():
        assert m <= 2 * axis.step, "interval %d on axis %d holds %d facets (> %d)" % (g, t, m, 2 * axis.step)
    return found


def canonical_cell(axes: Sequence[GridAxis], b: Box) -> tuple:
    return tuple(a.interval_of(x) for a, x in zip(axes, b.lo))


def cell_box(axes: Sequence[GridAxis], cell: Sequence[int]) -> Tuple[tuple, tuple]:
    bs = [a.bounds(g) for a, g in zip(axes, cell)]
    return tuple(x for x, _ in bs), tuple(y for _, y in bs)


def marked_cells(lo: np.ndarray, hi: np.ndarray, axes: Sequence[GridAxis]) -> List[tuple]:
    """Canonical cells of all nonempty pairwise intersections, sorted."""
    n, d = lo.shape
    cuts = [np.array(a.chosen, dtype=np.int64) for a in axes]
    found = set()
    for i in range(n - 1):
        ilo = np.maximum(lo[i], lo[i + 1:])
        ihi = np.minimum(hi[i], hi[i + 1:])
        live = np.all(ilo <= ihi, axis=1)
        if not live.any():
            continue
        ilo = ilo[live]
        cols = [np.searchsorted(cuts[t], ilo[:, t], side="right") for t in range(d)]
        found.update(zip(*(c.tolist() for c in cols)))
    return sorted(found)


# -- box intersection ---------------------------------------------------------------

class BoxInt:
    """Boxes meeting a query box, any dimension >= 2.

    A box meets ``q`` iff it contains ``q.lo`` or one of its facets meets
    ``q``.  Facets are found per axis: a balanced tree over the sorted facet
    coordinates, and for each canonical node of the query's range a box
    intersection structure one dimension down.  Two dimensions use the
    planar rectangle intersection structure.  Node structures are built on
    first use; blocks of at most ``leaf`` facets are scanned.
    """

    def __init__(self, lo: Sequence[tuple], hi: Sequence[tuple], pay: Sequence[int],
                 leaf: int = LEAF) -> None:
        self.n = n = len(lo)
        self.k = k = len(lo[0]) if n else 0
        self.lo = [tuple(x) for x in lo]
        self.hi = [tuple(x) for x in hi]
        self.pay = list(pay)
        self.leaf = leaf
        self.rect = None
        self.flat = n <= max(leaf, 1) or k == 1
        if self.flat:
            return
        if k == 2:
            self.rect = RectIntersection([x[0] for x in self.lo], [x[1] for x in self.lo],
                                         [x[0] for x in self.hi], [x[1] for x in self.hi])
            return
        self.enc = Enclosure(self.lo, self.hi, list(range(n)), leaf)
        self.facets = []
        for t in range(k):
            ent = sorted([(self.lo[p][t], p) for p in range(n)] + [(self.hi[p][t], p) for p in range(n)])
            P = pow2_at_least(len(ent))
            self.facets.append(([v for v, _ in ent], [p for _, p in ent], P, P.bit_length() - 1, {}))

    def _child(self, t: int, node: int) -> "BoxInt":
        vals, owners, P, H, kids = self.facets[t]
        child = kids.get(node)
        if child is None:
            f, l = block_range(node, H)
            ps = list(dict.fromkeys(owners[f:l + 1]))
            child = BoxInt([self.lo[p][:t] + self.lo[p][t + 1:] for p in ps],
                           [self.hi[p][:t] + self.hi[p][t + 1:] for p in ps],
                           [self.pay[p] for p in ps], self.leaf)
            kids[node] = child
        return child

    def _meets(self, p: int, qlo, qhi) -> bool:
        lo, hi = self.lo[p], self.hi[p]
        for t in range(self.k):
            if lo[t] > qhi[t] or hi[t] < qlo[t]:
                return False
        return True

    def _collect(self, qlo, qhi, work: Work, out: list, first: bool) -> bool:
        if not self.n:
            return False
        if self.flat:
            for p in range(self.n):
                work.steps += 1
                if self._meets(p, qlo, qhi):
                    out.append(self.pay[p])
                    if first:
                        return True
            return False
        if self.rect is not None:
            if first:
                if self.rect.any(qlo[0], qlo[1], qhi[0], qhi[1], work):
                    out.append(None)
                    return True
                return False
            out.extend(self.pay[p] for p in self.rect.report(qlo[0], qlo[1], qhi[0], qhi[1], work))
            return False
        got = self.enc.report(qlo, work, first=first)
        if got:
            out.extend(self.pay[p] for p in got)
            if first:
                return True
        for t in range(self.k):
            vals, owners, P, H, _ = self.facets[t]
            i = bisect_left(vals, qlo[t])
            j = bisect_right(vals, qhi[t])
            if i >= j:
                continue
            rlo, rhi = qlo[:t] + qlo[t + 1:], qhi[:t] + qhi[t + 1:]
            for node in canonical_nodes(i, j - 1, P):
                work.nodes += 1
                f, l = block_range(node, H)
                if l - f + 1 <= self.leaf:
                    for e in range(f, min(l + 1, len(owners))):
                        work.steps += 1
                        p = owners[e]
                        if self._meets(p, qlo, qhi):
                            out.append(self.pay[p])
                            if first:
                                return True
                elif self._child(t, node)._collect(rlo, rhi, work, out, first) and first:
                    return True
        return False

    def query(self, qlo: Sequence[int], qhi: Sequence[int], work: Optional[Work] = None) -> list:
        """Payloads of the boxes meeting ``[qlo, qhi]``, each once."""
        if work is None:
            work = Work()
        out: list = []
        self._collect(tuple(qlo), tuple(qhi), work, out, False)
        return list(dict.fromkeys(out))

    def any(self, qlo: Sequence[int], qhi: Sequence[int], work: Optional[Work] = None) -> bool:
        if work is None:
            work = Work()
        return self._collect(tuple(qlo), tuple(qhi), work, [], True)

    def materialize(self) -> None:
        if self.flat or self.rect is not None:
            return
        for t in range(self.k):
            vals, owners, P, H, _ = self.facets[t]
            stack = [1]
            while stack:
                node = stack.pop()
                f, l = block_range(node, H)
                if f >= len(owners) or l - f + 1 <= self.leaf:
                    continue
                self._child(t, node).materialize()
                if node < P:
                    stack.extend((2 * node, 2 * node + 1))

    @property
    def cells(self) -> int:
        """Stored elements among the parts built so far."""
        if self.flat:
            return self.n
        if self.rect is not None:
            return self.rect.cells + self.rect.ptenc.cells
        total = self.enc.cells
        for vals, owners, P, H, kids in self.facets:
            total += len(vals) + sum(c.cells for c in kids.values())
        return total


# -- the recursive structure --------------------------------------------------------

class PairScan:
    """Direct pair scan; stands in for small children."""

    def __init__(self, boxes: Sequence[Box]) -> None:
        self.boxes = list(boxes)

    def query(self, q: Box, work: Optional[Work] = None) -> List[PairReport]:
        if work is None:
            work = Work()
        live = []
        for b in self.boxes:
            work.steps += 1
            lo = tuple(max(x, y) for x, y in zip(b.lo, q.lo))
            hi = tuple(min(x, y) for x, y in zip(b.hi, q.hi))
            if all(x <= y for x, y in zip(lo, hi)):
                live.append((b.id, lo, hi))
        out = []
        for u in range(len(live)):
            i, alo, ahi = live[u]
            for w in range(u + 1, len(live)):
                j, blo, bhi = live[w]
                work.steps += 1
                if all(max(a, b) <= min(c, e) for a, b, c, e in zip(alo, blo, ahi, bhi)):
                    out.append(PairReport(min(i, j), max(i, j), Tag.HD_CASE2))
        out.sort()
        return out

    def total_cells(self) -> int:
        return len(self.boxes)


class BpiStructure:
    """Pairs of d-dimensional boxes (d >= 3) whose intersection meets a query."""

    def __init__(self, boxes: Sequence[Box], delta=DEFAULT_DELTA, leaf: int = LEAF,
                 _nested: bool = False, d: Optional[int] = None) -> None:
        self.boxes = list(boxes)
        self.n = n = len(self.boxes)
        if d is None:
            d = self.boxes[0].d if n else 3
        self.d = d
        if d < 3:
            raise UsageError("use the planar structure for d < 3")
        for b in self.boxes:
            if b.d != d:
                raise UsageError("mixed dimensions")
        self.ids = [b.id for b in self.boxes]
        if len(set(self.ids)) != n:
            raise UsageError("box ids must be unique")
        self.pos = {i: p for p, i in enumerate(self.ids)}
        if _nested:
            self.delta = as_fraction(delta)
        else:
            self.delta = check_delta(delta, d)
        self.leaf = leaf
        step = grid_step(n, self.delta)
        self.lo = [b.lo for b in self.boxes]
        self.hi = [b.hi for b in self.boxes]
        self.axes = [GridAxis(t, [x[t] for x in self.lo] + [x[t] for x in self.hi], step) for t in range(d)]
        self.slab = [slab_facets(self.boxes, a) for a in self.axes]
        # boxes whose upper facet sits exactly on a chosen value
        self.touch: List[Dict[int, List[int]]] = []
        for a in self.axes:
            tl: Dict[int, List[int]] = {}
            for p in range(n):
                k = bisect_left(a.chosen, self.hi[p][a.t])
                if k < len(a.chosen) and a.chosen[k] == self.hi[p][a.t]:
                    tl.setdefault(k, []).append(p)
            self.touch.append(tl)
        if n:
            alo = np.array(self.lo, dtype=np.int64)
            ahi = np.array(self.hi, dtype=np.int64)
            self.marked = marked_cells(alo, ahi, self.axes)
        else:
            self.marked = []
        self.marked_set = set(self.marked)
        self.gridcont = RangeTree(self.marked, list(range(len(self.marked))), leaf) if self.marked else None
        self.boxint = BoxInt(self.lo, self.hi, list(range(n)), leaf)
        self._faces: Dict[int, BoxInt] = {}
        self._children: Dict[tuple, object] = {}

    # -- pieces ---------------------------------------------------------------------

    def canonical_cell(self, b: Box) -> tuple:
        return canonical_cell(self.axes, b)

    def gridcont_query(self, q: Box, work: Optional[Work] = None) -> List[tuple]:
        """Marked cells contained in ``q``."""
        if work is None:
            work = Work()
        if self.gridcont is None:
            return []
        lo, hi = [], []
        for a, x, y in zip(self.axes, q.lo, q.hi):
            g0, g1 = a.inner_range(x, y)
            work.nodes += 1
            if g0 > g1:
                return []
            lo.append(g0)
            hi.append(g1)
        return [self.marked[k] for k in sorted(self.gridcont.query(lo, hi, work))]

    def boxint_query(self, q: Box, work: Optional[Work] = None) -> List[int]:
        """Ids of boxes meeting ``q``."""
        return sorted(self.ids[p] for p in self.boxint.query(q.lo, q.hi, work))

    def face_structure(self, F: int) -> BoxInt:
        """Box intersection over the faces flattened to the lower facet on the axes in ``F``."""
        s = self._faces.get(F)
        if s is None:
            d = self.d
            his = [tuple(lo[t] if F >> t & 1 else hi[t] for t in range(d)) for lo, hi in zip(self.lo, self.hi)]
            s = self._faces[F] = BoxInt(self.lo, his, list(range(self.n)), self.leaf)
        return s

    def _pairfind(self, cell: tuple, work: Work) -> List[Tuple[int, int]]:
        d = self.d
        clo, chi = cell_box(self.axes, cell)
        full = (1 << d) - 1
        lo, hi, ids, axes = self.lo, self.hi, self.ids, self.axes
        out = []
        for F in range(1 << d):
            A_s, B_s = self.face_structure(F), self.face_structure(full ^ F)
            if not (A_s.any(clo, chi, work) and B_s.any(clo, chi, work)):
                continue
            A = A_s.query(clo, chi, work)
            B = B_s.query(clo, chi, work)
            for a in A:
                la, ha, ia = lo[a], hi[a], ids[a]
                for b in B:
                    if ids[b] <= ia:
                        continue
                    work.candidates += 1
                    lb, hb = lo[b], hi[b]
                    ok = True
                    mask = 0
                    for t in range(d):
                        x = la[t] if la[t] >= lb[t] else lb[t]
                        if x > (ha[t] if ha[t] <= hb[t] else hb[t]) or axes[t].interval_of(x) != cell[t]:
                            ok = False
                            break
                        if la[t] >= lb[t]:
                            mask |= 1 << t
                    if ok and mask == F:
                        out.append((a, b))
        return out

    def pairfind_query(self, cell: Sequence[int], work: Optional[Work] = None) -> List[PairReport]:
        """Pairs whose intersection has ``cell`` as its canonical cell."""
        cell = tuple(cell)
        if cell not in self.marked_set:
            raise UsageError("cell %r is not marked" % (cell,))
        if work is None:
            work = Work()
        ids = self.ids
        return sorted(PairReport(min(ids[a], ids[b]), max(ids[a], ids[b]), Tag.HD_CASE1)
                      for a, b in self._pairfind(cell, work))

    def child(self, t: int, g: int, point: bool = False):
        """Structure one dimension down for axis ``t``.

        With ``point`` false: the boxes spanning interval ``g``.  With
        ``point`` true: the boxes containing chosen value ``g``.  None when
        fewer than two boxes qualify."""
        key = (t, g, point)
        if key in self._children:
            return self._children[key]
        c = self.axes[t].chosen
        if point:
            L = R = c[g]
        else:
            L, R = c[g - 1], c[g]
        sel = [b.drop_axis(t) for b in self.boxes if b.lo[t] <= L and b.hi[t] >= R]
        if len(sel) < 2:
            s = None
        elif len(sel) <= 4 * self.leaf:
            s = PairScan(sel)
        elif self.d == 3:
            s = PlanarStructure(sel)
        else:
            s = BpiStructure(sel, self.delta, self.leaf, _nested=True)
        self._children[key] = s
        return s

    # -- query ----------------------------------------------------------------------

    def query(self, q: Box, work: Optional[Work] = None) -> List[PairReport]:
        if q.d != self.d:
            raise UsageError("query dimension %d != %d" % (q.d, self.d))
        if work is None:
            work = Work()
        lo, hi, ids, pos = self.lo, self.hi, self.ids, self.pos
        qlo, qhi = q.lo, q.hi
        d = self.d
        seen = set()
        out: List[PairReport] = []

        def emit(a: int, b: int, tag: Tag) -> None:
            if a == b:
                return
            key = (a, b) if a < b else (b, a)
            if key in seen:
                return
            work.candidates += 1
            la, ha, lb, hb = lo[a], hi[a], lo[b], hi[b]
            for t in range(d):
                if max(la[t], lb[t], qlo[t]) > min(ha[t], hb[t], qhi[t]):
                    return
            seen.add(key)
            i, j = ids[a], ids[b]
            out.append(PairReport(min(i, j), max(i, j), tag))

        for cell in self.gridcont_query(q, work):
            for a, b in self._pairfind(cell, work):
                emit(a, b, Tag.HD_CASE1)

        for t in range(d):
            axis = self.axes[t]
            c = axis.chosen
            qp = q.drop_axis(t)
            for g in dict.fromkeys((axis.interval_of(qlo[t]), axis.interval_of(qhi[t]))):
                own = list(self.slab[t].get(g, ()))
                subs = []
                if 1 <= g < len(c):
                    subs.append(self.child(t, g))
                if g >= 1 and qlo[t] <= c[g - 1] <= qhi[t]:
                    # pairs meeting the slab only on its left boundary
                    tl = self.touch[t].get(g - 1, ())
                    if len(tl) <= 2 * axis.step:
                        own.extend(tl)
                    else:
                        subs.append(self.child(t, g - 1, point=True))
                for s in own:
                    work.steps += 1
                    slo = tuple(max(x, y) for x, y in zip(lo[s], qlo))
                    shi = tuple(min(x, y) for x, y in zip(hi[s], qhi))
                    if any(x > y for x, y in zip(slo, shi)):
                        continue
                    for p in self.boxint.query(slo, shi, work):
                        emit(s, p, Tag.HD_CASE2)
                for sub in subs:
                    if sub is None:
                        continue
                    work.nodes += 1
                    for r in sub.query(qp, work):
                        emit(pos[r.i], pos[r.j], Tag.HD_CASE2)
        out.sort()
        return out

    # -- size -----------------------------------------------------------------------

    def materialize(self) -> None:
        """Build every lazily built part, recursively."""
        self.boxint.materialize()
        for F in range(1 << self.d):
            self.face_structure(F).materialize()
        for t, axis in enumerate(self.axes):
            for g in range(1, len(axis.chosen)):
                s = self.child(t, g)
                if isinstance(s, BpiStructure):
                    s.materialize()
            for g in range(len(axis.chosen)):
                s = self.child(t, g, point=True)
                if isinstance(s, BpiStructure):
                    s.materialize()

    def stats(self) -> Dict[str, int]:
        """Stored-element counts of the parts built so far."""
        kids = 0
        for s in self._children.values():
            if s is not None:
                kids += s.total_cells()
        return {
            "n": self.n,
            "d": self.d,
            "grid": sum(len(a.chosen) for a in self.axes),
            "slab_facets": sum(len(v) for s in self.slab for v in s.values()),
            "marked": len(self.marked),
            "gridcont": self.gridcont.cells if self.gridcont is not None else 0,
            "boxint": self.boxint.cells,
            "pairfind": sum(s.cells for s in self._faces.values()),
            "children": kids,
            "children_built": sum(1 for s in self._children.values() if s is not None),
        }

    def total_cells(self) -> int:
        s = self.stats()
        return sum(s[k] for k in ("grid", "slab_facets", "gridcont", "boxint", "pairfind", "children"))


def build_bpi(boxes: Sequence[Box], delta=DEFAULT_DELTA, leaf: int = LEAF,
              d: Optional[int] = None) -> BpiStructure:
    return BpiStructure(boxes, delta, leaf, d=d)


def query_bpi(structure: BpiStructure, q: Box, work: Optional[Work] = None) -> List[PairReport]:
    return structure.query(q, work)
