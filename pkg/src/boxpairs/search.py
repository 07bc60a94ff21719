"""Static search structures shared by the planar and higher-dimensional
builds.

Everything here is immutable after construction.  Trees are laid out
implicitly (heap numbering, root 1, leaves ``P + i`` for a power of two
``P``) so that node identities are plain integers.
"""

from __future__ import annotations

from array import array
from bisect import bisect_left, bisect_right
from typing import List, Optional, Sequence

import numpy as np

from .counters import Work

BIG = 1 << 62
NEG = -BIG
LEAF = 8


def pow2_at_least(n: int) -> int:
    p = 1
    while p < n:
        p <<= 1
    return p


def canonical_nodes(lo: int, hi: int, P: int) -> List[int]:
    """Heap ids of the maximal blocks covering leaves ``lo..hi`` (inclusive)."""
    out = []
    l, r = lo + P, hi + P + 1
    while l < r:
        if l & 1:
            out.append(l)
            l += 1
        if r & 1:
            r -= 1
            out.append(r)
        l >>= 1
        r >>= 1
    return out


def block_range(node: int, H: int) -> tuple:
    """Leaf interval ``[first, last]`` under heap node ``node`` of a tree of height H."""
    level = node.bit_length() - 1
    shift = H - level
    first = (node - (1 << level)) << shift
    return first, first + (1 << shift) - 1


class Slots:
    """Elementary slots over a sorted coordinate set.

    Slot ``2k+1`` is the single coordinate ``u[k]``; even slots are the open
    gaps between (and outside) consecutive coordinates.  Closed intervals
    with endpoints in ``u`` map to contiguous slot ranges.
    """

    def __init__(self, coords) -> None:
        self.u = sorted(set(coords))
        self.count = 2 * len(self.u) + 1

    def slot(self, x: int) -> int:
        u = self.u
        k = bisect_left(u, x)
        if k < len(u) and u[k] == x:
            return 2 * k + 1
        return 2 * k

    def span(self, lo: int, hi: int) -> tuple:
        return self.slot(lo), self.slot(hi)


# -- priority search trees ----------------------------------------------------

def _stored_levels(V: np.ndarray) -> np.ndarray:
    """Top-down min-by-value selection for a batch of padded PSTs.

    ``V`` has shape (G, s) with s a power of two; padding carries BIG.
    Returns (G, 2s) arrays of in-group positions (or -1) in heap order.
    """
    G, s = V.shape
    stored = np.full((G, 2 * s), -1, dtype=np.int64)
    Vw = V.copy()
    level, nb = 0, 1
    while nb <= s:
        w = s // nb
        blk = Vw.reshape(G, nb, w)
        am = blk.argmin(axis=2)
        mv = np.take_along_axis(blk, am[:, :, None], 2)[:, :, 0]
        pos = am + (np.arange(nb, dtype=np.int64) * w)[None, :]
        ok = mv < BIG
        stored[:, nb:2 * nb] = np.where(ok, pos, -1)
        rows, cols = np.nonzero(ok)
        Vw[rows, pos[rows, cols]] = BIG
        level += 1
        nb <<= 1
    return stored


class PSTForest:
    """A set of static priority search trees in flat padded storage.

    Tree ``g`` answers: report payloads with ``A <= key <= B`` and
    ``val <= C``.  Keys are heap-ordered by value inside a balanced tree on
    key order, so a query costs O(log m + K).
    """

    def __init__(self, sizes: Sequence[int], keys: np.ndarray, vals: np.ndarray,
                 pays: np.ndarray) -> None:
        # Inputs are concatenated group by group, each group sorted by key.
        sizes = np.asarray(sizes, dtype=np.int64)
        G = len(sizes)
        starts = np.zeros(G + 1, dtype=np.int64)
        np.cumsum(sizes, out=starts[1:])
        padded = np.ones(G, dtype=np.int64)
        nz = sizes > 1
        padded[nz] = 1 << np.ceil(np.log2(sizes[nz])).astype(np.int64)
        bases = np.zeros(G + 1, dtype=np.int64)
        np.cumsum(padded, out=bases[1:])
        total = int(bases[-1])
        K = np.full(total, BIG, dtype=np.int64)
        Vf = np.full(total, BIG, dtype=np.int64)
        Pf = np.full(total, -1, dtype=np.int64)
        ST = np.full(2 * total, -1, dtype=np.int64)
        for s in np.unique(padded):
            s = int(s)
            gs = np.nonzero(padded == s)[0]
            rows = np.repeat(gs, s)
            offs = np.tile(np.arange(s, dtype=np.int64), len(gs))
            src = starts[rows] + offs
            real = offs < sizes[rows]
            dst = bases[rows] + offs
            K[dst[real]] = keys[src[real]]
            Vf[dst[real]] = vals[src[real]]
            Pf[dst[real]] = pays[src[real]]
            st = _stored_levels(Vf[dst].reshape(len(gs), s))
            sdst = (2 * bases[gs])[:, None] + np.arange(2 * s, dtype=np.int64)[None, :]
            ST[sdst.ravel()] = st.ravel()
        self.base = array("q", bases[:-1].tolist())
        self.size = array("q", padded.tolist())
        self.real = array("q", sizes.tolist())
        self.key = array("q", K.tolist())
        self.val = array("q", Vf.tolist())
        self.pay = array("q", Pf.tolist())
        self.stored = array("q", ST.tolist())

    def __len__(self) -> int:
        return len(self.base)

    @property
    def cells(self) -> int:
        return len(self.key)

    def query(self, g: int, A: int, B: int, C: int, out: list, work: Work,
              first: bool = False) -> bool:
        b = self.base[g]
        s = self.size[g]
        r = self.real[g]
        key, val, pay, st = self.key, self.val, self.pay, self.stored
        sb = 2 * b
        found = False
        stack = [1]
        while stack:
            node = stack.pop()
            work.nodes += 1
            p = st[sb + node]
            if p < 0 or val[b + p] > C:
                continue
            level = node.bit_length() - 1
            w = s >> level
            lo = (node - (1 << level)) * w
            hi = min(lo + w, r) - 1
            if key[b + lo] > B or key[b + hi] < A:
                continue
            k = key[b + p]
            if A <= k <= B:
                out.append(pay[b + p])
                if first:
                    return True
                found = True
            if w > 1:
                stack.append(2 * node + 1)
                stack.append(2 * node)
        return found


# -- crossing structure ---------------------------------------------------------

class CrossingStructure:
    """Axis-parallel segments ``fixed x [lo, hi]`` crossing a query box.

    Reports payloads with ``a <= fixed <= b``, ``lo <= c`` and ``hi >= d``:
    a balanced tree on ``fixed`` whose nodes hold priority search trees
    keyed by ``lo`` and heap-ordered by ``-hi``.  O(log^2 n + K) per query.
    """

    def __init__(self, fixed, lo, hi, pay) -> None:
        fixed = np.asarray(fixed, dtype=np.int64)
        lo = np.asarray(lo, dtype=np.int64)
        hi = np.asarray(hi, dtype=np.int64)
        pay = np.asarray(pay, dtype=np.int64)
        order = np.lexsort((pay, fixed))
        self.n = n = len(fixed)
        self.F = fixed[order].tolist()
        self.LO = lo[order].tolist()
        self.HI = hi[order].tolist()
        self.PAY = pay[order].tolist()
        self.P = P = pow2_at_least(max(n, 1))
        self.H = P.bit_length() - 1
        groups = []
        sizes = []
        parts_k, parts_v, parts_p = [], [], []
        self.group_of = {}
        level, w = 0, P
        while w > LEAF and n:
            nblocks = (n + w - 1) // w
            blk = np.arange(n, dtype=np.int64) // w
            o = np.lexsort((lo[order], blk))
            cnt = np.bincount(blk, minlength=nblocks)
            for j in range(nblocks):
                self.group_of[(1 << level) + j] = len(sizes)
                sizes.append(int(cnt[j]))
            parts_k.append(lo[order][o])
            parts_v.append(-hi[order][o])
            parts_p.append(pay[order][o])
            level += 1
            w >>= 1
        if sizes:
            self.forest = PSTForest(sizes, np.concatenate(parts_k), np.concatenate(parts_v),
                                    np.concatenate(parts_p))
        else:
            self.forest = None

    @property
    def cells(self) -> int:
        return self.n + (self.forest.cells if self.forest is not None else 0)

    def _scan(self, i: int, j: int, c: int, d: int, out: list, work: Work, first: bool) -> bool:
        LO, HI, PAY = self.LO, self.HI, self.PAY
        for t in range(i, j):
            work.steps += 1
            if LO[t] <= c and HI[t] >= d:
                out.append(PAY[t])
                if first:
                    return True
        return False

    def query(self, a: int, b: int, c: int, d: int, work: Work, out: Optional[list] = None,
              first: bool = False) -> list:
        if out is None:
            out = []
        if not self.n or a > b:
            return out
        i = bisect_left(self.F, a)
        j = bisect_right(self.F, b)
        if i >= j:
            return out
        H, forest = self.H, self.forest
        stack = [1]
        while stack:
            node = stack.pop()
            work.nodes += 1
            f, l = block_range(node, H)
            l += 1
            if l <= i or f >= j:
                continue
            w = l - f
            if i <= f and l <= j and w > LEAF:
                if forest.query(self.group_of[node], NEG, c, -d, out, work, first) and first:
                    return out
            elif w <= LEAF:
                if self._scan(max(f, i), min(l, j, self.n), c, d, out, work, first) and first:
                    return out
            else:
                stack.append(2 * node + 1)
                stack.append(2 * node)
        return out

    def any(self, a: int, b: int, c: int, d: int, work: Work) -> bool:
        return bool(self.query(a, b, c, d, work, first=True))


class SlotStabber:
    """Horizontal segments ``y x [s, e]`` (s, e are slot indices) met by a
    vertical query segment ``sq x [A, B]``.

    Each segment lives at the lowest node of an implicit tree over slots
    whose block contains it; the node keeps two priority search trees
    (by left end and by right end).  O(log^2 n + K) per query.
    """

    def __init__(self, nslots: int, y, s, e, pay) -> None:
        y = np.asarray(y, dtype=np.int64)
        s = np.asarray(s, dtype=np.int64)
        e = np.asarray(e, dtype=np.int64)
        pay = np.asarray(pay, dtype=np.int64)
        self.n = len(y)
        self.P = P = pow2_at_least(max(nslots, 1))
        self.H = H = P.bit_length() - 1
        self.groups = {}
        self.forest_l = self.forest_r = None
        if not self.n:
            return
        x = s ^ e
        bl = np.zeros(self.n, dtype=np.int64)
        nzm = x > 0
        bl[nzm] = np.floor(np.log2(x[nzm])).astype(np.int64) + 1
        level = H - bl
        node = (np.int64(1) << level) + (s >> bl)
        order = np.lexsort((pay, y, node))
        node_o = node[order]
        uniq, first_idx, counts = np.unique(node_o, return_index=True, return_counts=True)
        for g, v in enumerate(uniq.tolist()):
            self.groups[v] = g
        self.forest_l = PSTForest(counts, y[order], s[order], pay[order])
        self.forest_r = PSTForest(counts, y[order], -e[order], pay[order])

    @property
    def cells(self) -> int:
        if not self.n:
            return 0
        return self.forest_l.cells + self.forest_r.cells

    def query(self, sq: int, A: int, B: int, work: Work, out: Optional[list] = None) -> list:
        if out is None:
            out = []
        if not self.n or A > B or not 0 <= sq < self.P:
            return out
        H = self.H
        groups = self.groups
        for level in range(H + 1):
            shift = H - level
            node = (1 << level) + (sq >> shift)
            work.nodes += 1
            g = groups.get(node)
            if g is None:
                continue
            if shift == 0:
                self.forest_l.query(g, A, B, sq, out, work)
                continue
            mid = ((sq >> shift) << shift) + (1 << (shift - 1))
            if sq < mid:
                self.forest_l.query(g, A, B, sq, out, work)
            else:
                self.forest_r.query(g, A, B, -sq, out, work)
        return out


# -- orthogonal range reporting -------------------------------------------------

class RangeTree2D:
    """Layered range tree on points ``(x, y)``: a balanced tree on x whose
    blocks keep their points sorted by y.  O(log^2 n + K) per query."""

    def __init__(self, xs, ys, pay) -> None:
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        pay = np.asarray(pay, dtype=np.int64)
        self.n = n = len(xs)
        order = np.lexsort((ys, xs))
        self.X = xs[order].tolist()
        self.Y = ys[order].tolist()
        self.PAY = pay[order].tolist()
        self.P = P = pow2_at_least(max(n, 1))
        self.H = P.bit_length() - 1
        self.levels_y = []
        self.levels_p = []
        w = P
        ys_o, pay_o = ys[order], pay[order]
        while w > LEAF and n:
            blk = np.arange(n, dtype=np.int64) // w
            o = np.lexsort((ys_o, blk))
            self.levels_y.append(ys_o[o])
            self.levels_p.append(pay_o[o])
            w >>= 1

    @property
    def cells(self) -> int:
        return self.n * (1 + len(self.levels_y))

    def query(self, x1: int, x2: int, y1: int, y2: int, work: Work,
              out: Optional[list] = None, first: bool = False) -> list:
        if out is None:
            out = []
        if not self.n or x1 > x2 or y1 > y2:
            return out
        i = bisect_left(self.X, x1)
        j = bisect_right(self.X, x2)
        if i >= j:
            return out
        H = self.H
        stack = [1]
        while stack:
            node = stack.pop()
            work.nodes += 1
            f, l = block_range(node, H)
            l += 1
            if l <= i or f >= j:
                continue
            w = l - f
            if w <= LEAF:
                Y, PAY = self.Y, self.PAY
                for t in range(max(f, i), min(l, j)):
                    work.steps += 1
                    if y1 <= Y[t] <= y2:
                        out.append(PAY[t])
                        if first:
                            return out
            elif i <= f and l <= j:
                level = node.bit_length() - 1
                ly = self.levels_y[level]
                end = min(l, self.n)
                a = f + int(np.searchsorted(ly[f:end], y1, "left"))
                z = f + int(np.searchsorted(ly[f:end], y2, "right"))
                if a < z:
                    if first:
                        out.append(int(self.levels_p[level][a]))
                        return out
                    work.steps += z - a
                    out.extend(self.levels_p[level][a:z].tolist())
            else:
                stack.append(2 * node + 1)
                stack.append(2 * node)
        return out


class RangeTree:
    """Orthogonal range reporting over k-dimensional integer points.

    k = 1 is a sorted array, k = 2 a :class:`RangeTree2D`; higher k nests a
    (k-1)-dimensional tree in every block of a balanced tree on the first
    coordinate.
    """

    def __init__(self, points: Sequence[Sequence[int]], pay: Sequence[int], leaf: int = LEAF) -> None:
        self.k = k = len(points[0]) if len(points) else 0
        self.n = n = len(points)
        self.leaf = leaf
        self.points = [tuple(p) for p in points]
        self.pay = list(pay)
        self.children = {}
        self.inner = None
        if not n:
            return
        if k == 1:
            order = sorted(range(n), key=lambda i: self.points[i][0])
            self.xs = [self.points[i][0] for i in order]
            self.sorted_pay = [self.pay[i] for i in order]
            return
        if k == 2:
            self.inner = RangeTree2D([p[0] for p in self.points], [p[1] for p in self.points], self.pay)
            return
        order = sorted(range(n), key=lambda i: self.points[i][0])
        self.points = [self.points[i] for i in order]
        self.pay = [self.pay[i] for i in order]
        self.xs = [p[0] for p in self.points]
        self.P = P = pow2_at_least(n)
        self.H = P.bit_length() - 1
        stack = [1]
        while stack:
            node = stack.pop()
            f, l = block_range(node, self.H)
            l = min(l + 1, n)
            if f >= n:
                continue
            if l - f > leaf:
                self.children[node] = RangeTree([p[1:] for p in self.points[f:l]], self.pay[f:l], leaf)
                if node >= P:
                    continue
                stack.append(2 * node)
                stack.append(2 * node + 1)

    @property
    def cells(self) -> int:
        if not self.n:
            return 0
        if self.k == 1:
            return self.n
        if self.k == 2:
            return self.inner.cells
        return self.n + sum(c.cells for c in self.children.values())

    def query(self, lo: Sequence[int], hi: Sequence[int], work: Work,
              out: Optional[list] = None) -> list:
        if out is None:
            out = []
        if not self.n:
            return out
        if self.k == 1:
            i = bisect_left(self.xs, lo[0])
            j = bisect_right(self.xs, hi[0])
            work.nodes += 1
            if i < j:
                work.steps += j - i
                out.extend(self.sorted_pay[i:j])
            return out
        if self.k == 2:
            return self.inner.query(lo[0], hi[0], lo[1], hi[1], work, out)
        i = bisect_left(self.xs, lo[0])
        j = bisect_right(self.xs, hi[0])
        if i >= j:
            return out
        H, n = self.H, self.n
        rest_lo, rest_hi = lo[1:], hi[1:]
        stack = [1]
        while stack:
            node = stack.pop()
            work.nodes += 1
            f, l = block_range(node, H)
            l = min(l + 1, n)
            if l <= i or f >= j:
                continue
            child = self.children.get(node)
            if i <= f and l <= j and child is not None:
                child.query(rest_lo, rest_hi, work, out)
            elif child is None:
                for t in range(max(f, i), min(l, j)):
                    work.steps += 1
                    p = self.points[t]
                    if all(a <= x <= b for a, x, b in zip(rest_lo, p[1:], rest_hi)):
                        out.append(self.pay[t])
            else:
                stack.append(2 * node + 1)
                stack.append(2 * node)
        return out


# -- point enclosure ----------------------------------------------------------------

class IntervalTree:
    """Centered interval tree for closed-interval stabbing.

    ``entries(p)`` returns ``(payload_list, count)`` pairs: the stabbing
    answer is the union of ``payload_list[:count]`` over the entries, with
    empty contributions dropped.
    """

    def __init__(self, lo: Sequence[int], hi: Sequence[int], pay: Sequence[int]) -> None:
        self.center = []
        self.left = []
        self.right = []
        self.by_lo = []      # (los ascending, payloads)
        self.by_hi = []      # (-his ascending, payloads)
        self.n = len(lo)
        self.root = self._build(list(zip(lo, hi, pay))) if self.n else -1

    def _build(self, items) -> int:
        ends = sorted([it[0] for it in items] + [it[1] for it in items])
        c = ends[len(ends) // 2]
        here = [it for it in items if it[0] <= c <= it[1]]
        lefts = [it for it in items if it[1] < c]
        rights = [it for it in items if it[0] > c]
        idx = len(self.center)
        self.center.append(c)
        self.left.append(-1)
        self.right.append(-1)
        a = sorted(here, key=lambda it: it[0])
        b = sorted(here, key=lambda it: -it[1])
        self.by_lo.append(([it[0] for it in a], [it[2] for it in a]))
        self.by_hi.append(([-it[1] for it in b], [it[2] for it in b]))
        if lefts:
            self.left[idx] = self._build(lefts)
        if rights:
            self.right[idx] = self._build(rights)
        return idx

    @property
    def cells(self) -> int:
        return 2 * self.n + len(self.center)

    def entries(self, p: int, work: Work) -> list:
        out = []
        v = self.root
        while v >= 0:
            work.nodes += 1
            c = self.center[v]
            if p < c:
                keys, pays = self.by_lo[v]
                k = bisect_right(keys, p)
                if k:
                    out.append((pays, k))
                v = self.left[v]
            elif p > c:
                keys, pays = self.by_hi[v]
                k = bisect_right(keys, -p)
                if k:
                    out.append((pays, k))
                v = self.right[v]
            else:
                pays = self.by_lo[v][1]
                if pays:
                    out.append((pays, len(pays)))
                break
        return out

    def stab(self, p: int, work: Work, out: Optional[list] = None, first: bool = False) -> list:
        """Report by linear scans so the cost is O(depth + K)."""
        if out is None:
            out = []
        v = self.root
        while v >= 0:
            work.nodes += 1
            c = self.center[v]
            if p < c:
                keys, pays = self.by_lo[v]
                for t in range(len(keys)):
                    if keys[t] > p:
                        break
                    work.steps += 1
                    out.append(pays[t])
                    if first:
                        return out
                v = self.left[v]
            elif p > c:
                keys, pays = self.by_hi[v]
                for t in range(len(keys)):
                    if keys[t] > -p:
                        break
                    work.steps += 1
                    out.append(pays[t])
                    if first:
                        return out
                v = self.right[v]
            else:
                pays = self.by_lo[v][1]
                if pays:
                    work.steps += len(pays)
                    out.extend(pays[:1] if first else pays)
                break
        return out


class Enclosure:
    """Boxes containing a query point (closed containment), any dimension.

    Segment tree over elementary slots of the first axis; every node holds
    the (k-1)-dimensional structure of the boxes assigned to it; the last
    axis is an :class:`IntervalTree`.  Sets of at most ``leaf`` boxes are
    scanned directly.
    """

    def __init__(self, lo: Sequence[Sequence[int]], hi: Sequence[Sequence[int]],
                 pay: Sequence[int], leaf: int = 0) -> None:
        self.n = n = len(lo)
        self.k = len(lo[0]) if n else 0
        self.leaf = leaf
        self.children = {}
        self.tree = None
        self.flat = None
        if not n:
            return
        if n <= leaf:
            self.flat = (list(map(tuple, lo)), list(map(tuple, hi)), list(pay))
            return
        if self.k == 1:
            self.tree = IntervalTree([x[0] for x in lo], [x[0] for x in hi], pay)
            return
        self.slots = Slots([x[0] for x in lo] + [x[0] for x in hi])
        self.P = P = pow2_at_least(self.slots.count)
        self.H = P.bit_length() - 1
        groups = {}
        for t in range(n):
            sl, sh = self.slots.span(lo[t][0], hi[t][0])
            for v in canonical_nodes(sl, sh, P):
                groups.setdefault(v, []).append(t)
        for v, members in groups.items():
            self.children[v] = Enclosure([lo[t][1:] for t in members], [hi[t][1:] for t in members],
                                         [pay[t] for t in members], leaf)

    @property
    def cells(self) -> int:
        if not self.n:
            return 0
        if self.flat is not None:
            return self.n
        if self.tree is not None:
            return self.tree.cells
        return sum(c.cells for c in self.children.values())

    def _path(self, x: int):
        leaf = self.P + self.slots.slot(x)
        while leaf:
            yield leaf
            leaf >>= 1

    def entries(self, p: Sequence[int], work: Work) -> list:
        if not self.n:
            return []
        if self.flat is not None:
            raise TypeError("entries() needs leaf=0")
        if self.tree is not None:
            return self.tree.entries(p[0], work)
        out = []
        rest = p[1:]
        for v in self._path(p[0]):
            work.nodes += 1
            child = self.children.get(v)
            if child is not None:
                out.extend(child.entries(rest, work))
        return out

    def report(self, p: Sequence[int], work: Work, out: Optional[list] = None,
               first: bool = False) -> list:
        if out is None:
            out = []
        if not self.n:
            return out
        if self.flat is not None:
            los, his, pays = self.flat
            for t in range(self.n):
                work.steps += 1
                if all(a <= x <= b for a, x, b in zip(los[t], p, his[t])):
                    out.append(pays[t])
                    if first:
                        return out
            return out
        if self.tree is not None:
            return self.tree.stab(p[0], work, out, first)
        rest = p[1:]
        for v in self._path(p[0]):
            work.nodes += 1
            child = self.children.get(v)
            if child is not None:
                before = len(out)
                child.report(rest, work, out, first)
                if first and len(out) > before:
                    return out
        return out

    def any(self, p: Sequence[int], work: Work) -> bool:
        return bool(self.report(p, work, first=True))
