"""Search structures against brute force."""

from hypothesis import given
from hypothesis import strategies as st

from boxpairs.counters import Work
from boxpairs.search import (CrossingStructure, Enclosure, IntervalTree, PSTForest, RangeTree, RangeTree2D,
                             SlotStabber, Slots, canonical_nodes, block_range)

coord = st.integers(0, 20)
probe = st.integers(-1, 21)


def test_canonical_nodes_cover_range_exactly():
    P = 16
    for lo in range(P):
        for hi in range(lo, P):
            leaves = []
            H = P.bit_length() - 1
            for v in canonical_nodes(lo, hi, P):
                f, l = block_range(v, H)
                leaves.extend(range(f, l + 1))
            assert sorted(leaves) == list(range(lo, hi + 1))


def test_slots_ties_and_gaps():
    s = Slots([5, 2, 5, 9])
    assert s.u == [2, 5, 9]
    assert [s.slot(x) for x in (1, 2, 3, 5, 7, 9, 10)] == [0, 1, 2, 3, 4, 5, 6]
    assert s.span(2, 9) == (1, 5)


@given(st.lists(st.tuples(coord, coord, coord), max_size=40),
       st.lists(st.tuples(probe, probe, probe, st.integers(-1, 41)), min_size=1, max_size=8))
def test_crossing_structure(segs, queries):
    F = [a for a, _, _ in segs]
    LO = [b for _, b, _ in segs]
    HI = [b + c for _, b, c in segs]
    cs = CrossingStructure(F, LO, HI, list(range(len(segs))))
    for a, b, c, d in queries:
        exp = [t for t in range(len(segs)) if a <= F[t] <= b and LO[t] <= c and HI[t] >= d]
        assert sorted(cs.query(a, b, c, d, Work())) == exp
        assert cs.any(a, b, c, d, Work()) == bool(exp)


@given(st.lists(st.tuples(coord, coord), max_size=50),
       st.lists(st.tuples(probe, probe, probe, probe), min_size=1, max_size=8))
def test_range_tree_2d(pts, queries):
    xs = [x for x, _ in pts]
    ys = [y for _, y in pts]
    rt = RangeTree2D(xs, ys, list(range(len(pts))))
    for x1, x2, y1, y2 in queries:
        exp = [t for t in range(len(pts)) if x1 <= xs[t] <= x2 and y1 <= ys[t] <= y2]
        assert sorted(rt.query(x1, x2, y1, y2, Work())) == exp
        assert bool(rt.query(x1, x2, y1, y2, Work(), first=True)) == bool(exp)


@given(st.integers(1, 4), st.sampled_from([0, 2, 8]), st.data())
def test_range_tree_k(k, leaf, data):
    pts = data.draw(st.lists(st.lists(coord, min_size=k, max_size=k), max_size=40))
    rt = RangeTree(pts, list(range(len(pts))), leaf=leaf)
    for _ in range(5):
        lo = data.draw(st.lists(probe, min_size=k, max_size=k))
        hi = [a + data.draw(st.integers(0, 20)) for a in lo]
        exp = [t for t, p in enumerate(pts) if all(a <= x <= b for a, x, b in zip(lo, p, hi))]
        assert sorted(rt.query(lo, hi, Work())) == exp


@given(st.lists(st.tuples(coord, st.integers(0, 10)), max_size=40), st.lists(probe, min_size=1, max_size=8))
def test_interval_tree(ivs, points):
    lo = [a for a, _ in ivs]
    hi = [a + b for a, b in ivs]
    it = IntervalTree(lo, hi, list(range(len(ivs))))
    for p in points:
        exp = [t for t in range(len(ivs)) if lo[t] <= p <= hi[t]]
        assert sorted(it.stab(p, Work())) == exp
        assert sorted(x for pays, c in it.entries(p, Work()) for x in pays[:c]) == exp


@given(st.integers(1, 4), st.sampled_from([0, 3]), st.data())
def test_enclosure(k, leaf, data):
    n = data.draw(st.integers(0, 30))
    los = [data.draw(st.lists(coord, min_size=k, max_size=k)) for _ in range(n)]
    his = [[a + data.draw(st.integers(0, 10)) for a in lo] for lo in los]
    en = Enclosure(los, his, list(range(n)), leaf=leaf)
    for _ in range(5):
        p = data.draw(st.lists(probe, min_size=k, max_size=k))
        exp = [t for t in range(n) if all(a <= x <= b for a, x, b in zip(los[t], p, his[t]))]
        assert sorted(en.report(p, Work())) == exp
        assert en.any(p, Work()) == bool(exp)
        if leaf == 0 and n:
            assert sorted(x for pays, c in en.entries(p, Work()) for x in pays[:c]) == exp


@given(st.integers(1, 30), st.data())
def test_slot_stabber(m, data):
    n = data.draw(st.integers(0, 30))
    S = [data.draw(st.integers(0, m - 1)) for _ in range(n)]
    E = [min(m - 1, s + data.draw(st.integers(0, m))) for s in S]
    Y = [data.draw(coord) for _ in range(n)]
    ss = SlotStabber(m, Y, S, E, list(range(n)))
    for _ in range(5):
        sq = data.draw(st.integers(0, m - 1))
        A = data.draw(probe)
        B = A + data.draw(st.integers(0, 20))
        exp = [t for t in range(n) if S[t] <= sq <= E[t] and A <= Y[t] <= B]
        assert sorted(ss.query(sq, A, B, Work())) == exp


@given(st.lists(st.lists(st.tuples(coord, coord), max_size=12), min_size=1, max_size=4),
       st.lists(st.tuples(probe, probe, probe), min_size=1, max_size=6))
def test_pst_forest(groups, queries):
    import numpy as np
    groups = [sorted(g) for g in groups]  # each group must arrive sorted by key
    sizes = [len(g) for g in groups]
    keys = np.array([k for g in groups for k, _ in g], dtype=np.int64)
    vals = np.array([v for g in groups for _, v in g], dtype=np.int64)
    pays = np.arange(len(keys), dtype=np.int64)
    f = PSTForest(sizes, keys, vals, pays)
    start = 0
    for gi, g in enumerate(groups):
        for A, B, C in queries:
            out = []
            f.query(gi, A, B, C, out, Work())
            exp = [start + t for t, (k, v) in enumerate(g) if A <= k <= B and v <= C]
            assert sorted(out) == exp
        start += len(g)
