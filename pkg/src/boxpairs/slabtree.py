"""Segment tree over x-slabs used to find crossing-type pairs.

Every rectangle ``S`` is stored at the nodes whose slab it spans while the
parent's slab is not spanned (the *spanning* set of the node) and at all
proper ancestors of those nodes, where ``S`` has a vertical side inside the
slab (the *partial* set).  A pair whose intersection spans a query box from
left to right has a unique node on the query's left-edge path where one of
the two is spanning and the other is spanning or partial.  Trimmed sides
(clipped to the union of the spanning rectangles) locate those nodes; sorted
lists and a persistent list per node enumerate the partners.

Slabs are measured in elementary slots (see :class:`~boxpairs.search.Slots`),
so equal coordinates and touching boundaries are resolved exactly.  The tree
is written for x-slabs; the y-slab instance is built on swapped coordinates.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from typing import Dict, Iterator, List, Tuple

import numpy as np

from .counters import Work
from .persistent import PersistentList
from .search import SlotStabber, block_range, pow2_at_least


def _span_nodes(sl: np.ndarray, sh: np.ndarray, H: int):
    """Spanning and partial (node, rect) memberships for slot ranges [sl, sh]."""
    n = len(sl)
    rect = np.arange(n, dtype=np.int64)
    span_n, span_r, part_n, part_r = [], [], [], []
    plo = np.ones(n, dtype=np.int64)
    phi = np.zeros(n, dtype=np.int64)
    for L in range(H + 1):
        s = H - L
        w = 1 << s
        lo_c = (sl + w - 1) >> s
        hi_c = ((sh + 1) >> s) - 1
        has_parent = plo <= phi
        for cand, extra in ((lo_c, None), (hi_c, lo_c)):
            ok = (lo_c <= cand) & (cand <= hi_c)
            par = cand >> 1
            ok &= ~(has_parent & (plo <= par) & (par <= phi))
            if extra is not None:
                ok &= cand != extra
            span_n.append((1 << L) + cand[ok])
            span_r.append(rect[ok])
        if L < H:
            a = sl >> s
            b = sh >> s
            for cand, extra in ((a, None), (b, a)):
                ok = ~((lo_c <= cand) & (cand <= hi_c))
                if extra is not None:
                    ok &= cand != extra
                part_n.append((1 << L) + cand[ok])
                part_r.append(rect[ok])
        plo, phi = lo_c, hi_c
    cat = lambda xs: np.concatenate(xs) if xs else np.zeros(0, dtype=np.int64)
    return cat(span_n), cat(span_r), cat(part_n), cat(part_r)


class SlabTree:
    """Crossing-pair finder for pairs whose intersection spans the query
    horizontally.  Coordinates are plain int sequences (x0, y0, x1, y1)."""

    def __init__(self, x0, y0, x1, y1) -> None:
        X0 = np.asarray(x0, dtype=np.int64)
        Y0 = np.asarray(y0, dtype=np.int64)
        X1 = np.asarray(x1, dtype=np.int64)
        Y1 = np.asarray(y1, dtype=np.int64)
        self.n = n = len(X0)
        self.y0 = Y0.tolist()
        self.y1 = Y1.tolist()
        u = np.unique(np.concatenate([X0, X1]))
        self.u = u.tolist()
        nslots = 2 * len(u) + 1
        self.P = P = pow2_at_least(nslots)
        self.H = H = P.bit_length() - 1
        sl = 2 * np.searchsorted(u, X0) + 1
        sh = 2 * np.searchsorted(u, X1) + 1
        self.sl, self.sh = sl.tolist(), sh.tolist()
        span_n, span_r, part_n, part_r = _span_nodes(sl, sh, H)

        # spanning rectangles of every node, sorted by top and by bottom
        o_top = np.lexsort((span_r, Y1[span_r], span_n))
        o_bot = np.lexsort((span_r, Y0[span_r], span_n))
        self.top_v = Y1[span_r[o_top]].tolist()
        self.top_r = span_r[o_top].tolist()
        self.bot_v = Y0[span_r[o_bot]].tolist()
        self.bot_r = span_r[o_bot].tolist()
        nodes_sorted = span_n[o_top]
        uniq, first, counts = np.unique(nodes_sorted, return_index=True, return_counts=True)
        self.range_of: Dict[int, Tuple[int, int]] = {
            v: (f, f + c) for v, f, c in zip(uniq.tolist(), first.tolist(), counts.tolist())}

        # memberships: spanning ones first (in top order), then partial ones
        ns = len(span_n)
        m_node = np.concatenate([nodes_sorted, part_n])
        m_rect = np.concatenate([span_r[o_top], part_r])
        self.m_node = m_node.tolist()
        self.m_rect = m_rect.tolist()
        self.n_span = ns
        self.n_part = len(part_n)
        pos_in_top = np.arange(ns, dtype=np.int64)
        top_m = pos_in_top   # membership id of each top-sorted entry
        bot_m = np.empty(ns, dtype=np.int64)
        # membership of the bottom-sorted entries: map (node, rect) -> membership
        key_top = nodes_sorted * (n + 1) + span_r[o_top]
        key_bot = span_n[o_bot] * (n + 1) + span_r[o_bot]
        ord_kt = np.argsort(key_top, kind="stable")
        bot_m[:] = ord_kt[np.searchsorted(key_top[ord_kt], key_bot)]
        self.top_m = top_m.tolist()
        self.bot_m = bot_m.tolist()

        # start pointers into the sorted lists, per membership
        yu = np.unique(np.concatenate([Y0, Y1])) if n else np.zeros(0, dtype=np.int64)
        R = len(yu) + 1
        rk0 = np.searchsorted(yu, Y0)
        rk1 = np.searchsorted(yu, Y1)
        tk = nodes_sorted * R + rk1[span_r[o_top]]
        bk = span_n[o_bot] * R + rk0[span_r[o_bot]]
        mk0 = m_node * R + rk0[m_rect]
        mk1 = m_node * R + rk1[m_rect]
        self.p_top_ge0 = np.searchsorted(tk, mk0, "left").tolist()
        self.p_bot_ge0 = np.searchsorted(bk, mk0, "left").tolist()
        self.p_top_le1 = (np.searchsorted(tk, mk1, "right") - 1).tolist()
        self.p_bot_le1 = (np.searchsorted(bk, mk1, "right") - 1).tolist()

        # persistent list of spanning rectangles per node, time = y
        tkeys = np.unique(np.concatenate([nodes_sorted * R + rk0[span_r[o_top]],
                                          nodes_sorted * R + rk1[span_r[o_top]]]))
        tnode = tkeys // R
        tstart = {v: i for v, i in zip(*np.unique(tnode, return_index=True))} if len(tkeys) else {}

        def version(mk):
            k = np.searchsorted(tkeys, mk, "left")
            kc = np.minimum(k, max(len(tkeys) - 1, 0))
            exact = (k < len(tkeys)) & (tkeys[kc] == mk) if len(tkeys) else np.zeros(len(mk), bool)
            base = np.array([tstart.get(v, 0) for v in m_node.tolist()], dtype=np.int64)
            rel = k - base
            ver = np.where(exact, 2 * rel, 2 * (rel - 1) + 1)
            return np.where(ver < 0, -1, ver).tolist()

        self.ver0 = version(mk0) if len(m_node) else []
        self.ver1 = version(mk1) if len(m_node) else []
        self.lists: Dict[int, PersistentList] = {}
        y0l, y1l = self.y0, self.y1
        for v, (f, e) in self.range_of.items():
            self.lists[v] = PersistentList([(y0l[r], y1l[r], (r,), r) for r in self.top_r[f:e]])

        # trimmed sides of partial memberships, and the side catalog
        self.trim_top = [None] * self.n_part
        self.trim_bot = [None] * self.n_part
        unions: Dict[int, Tuple[list, list]] = {}
        for v, (f, e) in self.range_of.items():
            rs = sorted(self.top_r[f:e], key=lambda r: y0l[r])
            starts, ends = [], []
            for r in rs:
                if starts and y0l[r] <= ends[-1]:
                    if y1l[r] > ends[-1]:
                        ends[-1] = y1l[r]
                else:
                    starts.append(y0l[r])
                    ends.append(y1l[r])
            unions[v] = (starts, ends)
        cat_y, cat_s, cat_e, cat_p = [], [], [], []
        for k in range(self.n_part):
            v = self.m_node[ns + k]
            r = self.m_rect[ns + k]
            if v not in unions:
                continue
            starts, ends = unions[v]
            a, b = y0l[r], y1l[r]
            i = bisect_right(starts, b) - 1
            top = None
            if i >= 0:
                if ends[i] >= b:
                    top = b
                elif ends[i] >= a:
                    top = ends[i]
            if top is None:
                continue
            i = bisect_left(ends, a)
            bot = a if starts[i] <= a else starts[i]
            self.trim_top[k], self.trim_bot[k] = top, bot
            f, l = block_range(v, H)
            s, e = max(self.sl[r], f), min(self.sh[r], l)
            cat_y += [top, bot]
            cat_s += [s, s]
            cat_e += [e, e]
            cat_p += [2 * (ns + k), 2 * (ns + k) + 1]
        self.catalog = SlotStabber(P, cat_y, cat_s, cat_e, cat_p)

    # -- sizes --------------------------------------------------------------------

    @property
    def memberships(self) -> int:
        """Sum over nodes of |spanning| + |partial|."""
        return self.n_span + self.n_part

    @property
    def cells(self) -> int:
        return (3 * self.memberships + 2 * len(self.top_v) + self.catalog.cells
                + sum(pl.count for pl in self.lists.values()))

    def node_sets(self) -> Dict[int, Tuple[set, set]]:
        out: Dict[int, Tuple[set, set]] = {}
        for k, (v, r) in enumerate(zip(self.m_node, self.m_rect)):
            out.setdefault(v, (set(), set()))[0 if k < self.n_span else 1].add(r)
        return out

    def slot(self, x: int) -> int:
        u = self.u
        k = bisect_left(u, x)
        return 2 * k + 1 if k < len(u) and u[k] == x else 2 * k

    # -- query --------------------------------------------------------------------

    def find(self, qx: int, qy0: int, qy1: int, work: Work) -> List[int]:
        """Memberships whose trimmed side meets the segment ``qx * [qy0, qy1]``."""
        found = []
        if not self.n:
            return found
        sq = self.slot(qx)
        v = self.P + sq
        top_v, bot_v, top_m, bot_m, bot_r = self.top_v, self.bot_v, self.top_m, self.bot_m, self.bot_r
        y1 = self.y1
        while v:
            work.nodes += 1
            rng = self.range_of.get(v)
            if rng is not None:
                f, e = rng
                a = bisect_left(top_v, qy0, f, e)
                b = bisect_right(top_v, qy1, a, e)
                found.extend(top_m[a:b])
                a = bisect_left(bot_v, qy0, f, e)
                b = bisect_right(bot_v, qy1, a, e)
                for t in range(a, b):
                    work.steps += 1
                    if y1[bot_r[t]] > qy1:
                        found.append(bot_m[t])
            v >>= 1
        ns = self.n_span
        for p in self.catalog.query(sq, qy0, qy1, work):
            k = p >> 1
            if p & 1:
                t = self.trim_top[k - ns]
                if qy0 <= t <= qy1:
                    continue
            found.append(k)
        return found

    def partners(self, k: int, qy0: int, qy1: int, work: Work) -> Iterator[int]:
        """Spanning rectangles of membership ``k``'s node whose y-range meets
        ``y(S) & [qy0, qy1]`` for the membership's rectangle ``S``."""
        v = self.m_node[k]
        j = self.m_rect[k]
        y0, y1 = self.y0, self.y1
        a, b = y0[j], y1[j]
        f, e = self.range_of[v]
        top_v, top_r, bot_v, bot_r = self.top_v, self.top_r, self.bot_v, self.bot_r
        pl = self.lists[v]
        if qy0 <= a <= qy1:
            lo, hi = a, min(b, qy1)
            t = self.p_top_ge0[k]
            while t < e and top_v[t] <= hi:
                work.steps += 1
                yield top_r[t]
                t += 1
            t = self.p_bot_ge0[k]
            while t < e and bot_v[t] <= hi:
                work.steps += 1
                r = bot_r[t]
                if y1[r] > hi:
                    yield r
                t += 1
            ver = self.ver0[k]
        elif qy0 <= b <= qy1:
            lo, hi = qy0, b
            t = self.p_top_le1[k]
            while t >= f and top_v[t] >= lo:
                work.steps += 1
                yield top_r[t]
                t -= 1
            t = self.p_bot_le1[k]
            while t >= f and bot_v[t] >= lo:
                work.steps += 1
                r = bot_r[t]
                if y1[r] > hi:
                    yield r
                t -= 1
            ver = self.ver1[k]
        else:
            return
        if ver < 0:
            return
        for _, r in pl.walk(ver, pl.heads[ver].next_at(ver), work):
            if y0[r] < lo and y1[r] > hi:
                yield r

    def candidate_pairs(self, qx: int, qy0: int, qy1: int, work: Work) -> Iterator[Tuple[int, int]]:
        for k in self.find(qx, qy0, qy1, work):
            j = self.m_rect[k]
            for r in self.partners(k, qy0, qy1, work):
                if r != j:
                    work.candidates += 1
                    yield (j, r)
