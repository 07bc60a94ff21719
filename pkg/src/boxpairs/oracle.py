"""Brute-force ground truth.  Nothing here calls library query code; only
the predicates of :mod:`boxpairs.geometry` are shared."""

from __future__ import annotations

from typing import Dict, List, Sequence, Set, Tuple

from .geometry import (BOTTOM, LEFT, RIGHT, TOP, Box, Stretch, intersect_boxes, side_segment,
                       triple_intersects)


def oracle_pairs(boxes: Sequence[Box], q: Box) -> Set[Tuple[int, int]]:
    out = set()
    n = len(boxes)
    for a in range(n):
        for b in range(a + 1, n):
            if triple_intersects(boxes[a], boxes[b], q):
                i, j = boxes[a].id, boxes[b].id
                out.add((i, j) if i < j else (j, i))
    return out


def oracle_pairs_fast(boxes: Sequence[Box], q: Box) -> Set[Tuple[int, int]]:
    """Same scan as :func:`oracle_pairs`, vectorized for large corpora."""
    import numpy as np

    n = len(boxes)
    if n < 2:
        return set()
    lo = np.array([b.lo for b in boxes], dtype=np.int64)
    hi = np.array([b.hi for b in boxes], dtype=np.int64)
    ids = np.array([b.id for b in boxes], dtype=np.int64)
    lo = np.maximum(lo, np.array(q.lo, dtype=np.int64))
    hi = np.minimum(hi, np.array(q.hi, dtype=np.int64))
    live = np.all(lo <= hi, axis=1)
    lo, hi, ids = lo[live], hi[live], ids[live]
    ok = np.ones((len(ids), len(ids)), dtype=bool)
    for t in range(lo.shape[1]):
        ok &= np.maximum(lo[:, None, t], lo[None, :, t]) <= np.minimum(hi[:, None, t], hi[None, :, t])
    a, b = np.nonzero(np.triu(ok, 1))
    i, j = ids[a], ids[b]
    return set(zip(np.minimum(i, j).tolist(), np.maximum(i, j).tolist()))


def oracle_stretches(boxes: Sequence[Box]) -> List[Stretch]:
    """Per side, scan every other rectangle for the covered part of the side."""
    order = {TOP: 0, BOTTOM: 1, LEFT: 2, RIGHT: 3}
    out = []
    for s in boxes:
        for side in (TOP, BOTTOM, LEFT, RIGHT):
            fixed, a, b = side_segment(s, side)
            vertical = side in (LEFT, RIGHT)
            if vertical:
                seg = Box(-1, (fixed, a), (fixed, b))
            else:
                seg = Box(-1, (a, fixed), (b, fixed))
            lows, highs = [], []
            for o in boxes:
                if o is s:
                    continue
                part = intersect_boxes(seg, o)
                if part is None:
                    continue
                ax = 1 if vertical else 0
                lows.append(part.lo[ax])
                highs.append(part.hi[ax])
            if lows:
                out.append(Stretch(s.id, side, fixed, min(lows), max(highs)))
    out.sort(key=lambda st: (st.owner, order[st.side]))
    return out


def oracle_canonical_cell(chosen: Sequence[Sequence[int]], p: Sequence[int]) -> tuple:
    """Interval index per axis: how many chosen values are <= the coordinate."""
    return tuple(sum(1 for c in cs if c <= x) for cs, x in zip(chosen, p))


def oracle_marked_cells(boxes: Sequence[Box], chosen: Sequence[Sequence[int]]) -> Set[tuple]:
    """Canonical cells of all nonempty pairwise intersections, by full scan."""
    out = set()
    n = len(boxes)
    for a in range(n):
        for b in range(a + 1, n):
            inter = intersect_boxes(boxes[a], boxes[b])
            if inter is not None:
                out.add(oracle_canonical_cell(chosen, inter.lo))
    return out


def oracle_pair_cells(boxes: Sequence[Box], chosen: Sequence[Sequence[int]]) -> Dict[tuple, Set[Tuple[int, int]]]:
    """Pairs grouped by the canonical cell of their intersection."""
    out: Dict[tuple, Set[Tuple[int, int]]] = {}
    n = len(boxes)
    for a in range(n):
        for b in range(a + 1, n):
            inter = intersect_boxes(boxes[a], boxes[b])
            if inter is not None:
                i, j = boxes[a].id, boxes[b].id
                out.setdefault(oracle_canonical_cell(chosen, inter.lo), set()).add((min(i, j), max(i, j)))
    return out


def _slot(u: Sequence[int], x: int) -> int:
    below = sum(1 for c in u if c < x)
    return 2 * below + 1 if x in u else 2 * below


def oracle_node_sets(boxes: Sequence[Box], u: Sequence[int], P: int) -> Dict[int, Tuple[set, set]]:
    """Spanning and partial sets of every node of a slot segment tree.

    ``u`` are the distinct x-coordinates and ``P`` the leaf count.  A box
    spans node v when v's slot block lies inside the box's slot range and
    the parent's block does not; it is partial at v when v is not a leaf and
    the block meets the range without lying inside it.  Sets hold box
    positions.
    """
    out: Dict[int, Tuple[set, set]] = {}
    H = P.bit_length() - 1
    for p, b in enumerate(boxes):
        sl, sh = _slot(u, b.lo[0]), _slot(u, b.hi[0])
        for v in range(1, 2 * P):
            level = v.bit_length() - 1
            w = 1 << (H - level)
            f = (v - (1 << level)) * w
            l = f + w - 1
            inside = sl <= f and l <= sh
            if inside:
                if v > 1:
                    pv = v >> 1
                    pl = pv.bit_length() - 1
                    pw = 1 << (H - pl)
                    pf = (pv - (1 << pl)) * pw
                    if sl <= pf and pf + pw - 1 <= sh:
                        continue
                out.setdefault(v, (set(), set()))[0].add(p)
            elif v < P and f <= sh and sl <= l:
                out.setdefault(v, (set(), set()))[1].add(p)
    return out


def oracle_canonical_nodes(boxes: Sequence[Box], u: Sequence[int], P: int,
                           q: Box) -> Dict[Tuple[int, int], List[int]]:
    """Per pair meeting ``q``: every node whose slab holds the left side of
    ``q`` with both boxes stored there and at least one of them spanning."""
    sets = oracle_node_sets(boxes, u, P)
    leaf = P + _slot(u, q.lo[0])
    path = []
    v = leaf
    while v:
        path.append(v)
        v >>= 1
    out: Dict[Tuple[int, int], List[int]] = {}
    n = len(boxes)
    for a in range(n):
        for b in range(a + 1, n):
            if not triple_intersects(boxes[a], boxes[b], q):
                continue
            i, j = boxes[a].id, boxes[b].id
            nodes = []
            for v in path:
                span, part = sets.get(v, (set(), set()))
                if (a in span or a in part) and (b in span or b in part) and (a in span or b in span):
                    nodes.append(v)
            out[(min(i, j), max(i, j))] = nodes
    return out
