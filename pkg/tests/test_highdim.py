from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from boxpairs.counters import Work
from boxpairs.gen import DISTRIBUTIONS, generate, generate_queries
from boxpairs.geometry import Box, Tag, UsageError, boxes_intersect
from boxpairs.highdim import (BoxInt, BpiStructure, GridAxis, build_grid, canonical_cell, check_delta,
                              grid_step, query_bpi)
from boxpairs.oracle import oracle_marked_cells, oracle_pair_cells, oracle_pairs

from strategies import boxes, query


def B(id, lo, hi):
    return Box(id, tuple(lo), tuple(hi))


def chosen(s):
    return [a.chosen for a in s.axes]


# -- grid ------------------------------------------------------------------------------

def test_grid_example():
    # four boxes whose x-facets project to 1..8
    bs = [B(k + 1, (2 * k + 1, 0, 0), (2 * k + 2, 1, 1)) for k in range(4)]
    ax = build_grid(bs, 0, Fraction(1, 3))
    assert ax.step == 2
    assert ax.chosen == [2, 4, 6, 8]
    assert [ax.bounds(g) for g in range(1, 4)] == [(2, 4), (4, 6), (6, 8)]
    assert ax.intervals == 5


def test_all_equal_projections():
    bs = [B(k + 1, (3, 0, 0), (3, 1, 1)) for k in range(5)]
    ax = build_grid(bs, 0, Fraction(1, 2))
    assert ax.chosen == [3]
    assert ax.intervals == 2
    assert ax.interval_of(2) == 0 and ax.interval_of(3) == 1


def test_canonical_cell_examples():
    axes = [GridAxis(0, [], 1), GridAxis(1, [], 1)]
    for a in axes:
        a.chosen = [2, 4, 6, 8]
    assert canonical_cell(axes, B(0, (3, 5), (9, 9))) == (1, 2)
    assert [axes[0].bounds(1), axes[1].bounds(2)] == [(2, 4), (4, 6)]
    assert canonical_cell(axes, B(0, (4, 4), (9, 9))) == (2, 2)
    assert canonical_cell(axes, B(0, (0, 1), (9, 9))) == (0, 0)


def test_inner_range_example():
    a = GridAxis(0, [], 1)
    a.chosen = [0, 2, 4, 6]
    g0, g1 = a.inner_range(1, 5)
    assert (a.bounds(g0)[0], a.bounds(g1)[1]) == (2, 4)
    g0, g1 = a.inner_range(1, 1)
    assert g0 > g1


def test_grid_step_is_exact():
    assert grid_step(4, Fraction(1, 3)) == 2
    assert grid_step(8, Fraction(1, 3)) == 4
    assert grid_step(1024, Fraction(1, 2)) == 32
    assert grid_step(1023, Fraction(1, 2)) == 31
    assert grid_step(100, Fraction(3, 4)) == 3


def test_delta_range():
    assert check_delta("1/2", 3) == Fraction(1, 2)
    assert check_delta(Fraction(1, 3), 3) == Fraction(1, 3)
    for bad in (1, Fraction(1, 4), 0, "x"):
        with pytest.raises(UsageError):
            check_delta(bad, 3)
    with pytest.raises(UsageError):
        BpiStructure([B(1, (0, 0, 0), (1, 1, 1))], 1)


@given(st.integers(3, 5), st.sampled_from(["1/d", "1/2", "3/4"]), st.data())
def test_interval_count_and_slab_bound(d, dl, data):
    bs = data.draw(boxes(d, max_n=40, min_n=1))
    delta = Fraction(1, d) if dl == "1/d" else Fraction(dl)
    s = BpiStructure(bs, delta)   # asserts the slab bound while building
    n = len(bs)
    step = grid_step(n, delta)
    for a in s.axes:
        assert a.intervals <= 2 * n // step + 2
        for g in range(a.intervals):
            L, R = a.bounds(g)
            inside = sum(1 for b in bs for x in (b.lo[a.t], b.hi[a.t]) if L < x < R)
            assert inside <= 2 * step


# -- marked cells, GridCont, BoxInt, PairFind ------------------------------------------

@given(st.integers(3, 4), st.data())
def test_marked_cells_and_gridcont(d, data):
    bs = data.draw(boxes(d, max_n=25))
    q = data.draw(query(d))
    s = BpiStructure(bs, Fraction(1, 2), d=d)
    marked = oracle_marked_cells(bs, chosen(s))
    assert set(s.marked) == marked
    inside = []
    for cell in marked:
        lo_hi = [a.bounds(g) for a, g in zip(s.axes, cell)]
        if all(q.lo[t] <= L and R <= q.hi[t] for t, (L, R) in enumerate(lo_hi)):
            inside.append(cell)
    assert sorted(s.gridcont_query(q)) == sorted(inside)


def test_boxint_examples():
    s = BpiStructure([B(1, (0, 0, 0), (4, 4, 4)), B(2, (2, 2, 2), (6, 6, 6))])
    assert s.boxint_query(B(0, (3, 3, 3), (3, 3, 3))) == [1, 2]
    assert s.boxint_query(B(0, (10, 10, 10), (11, 11, 11))) == []


@given(st.integers(3, 5), st.sampled_from([0, 2, 8]), st.data())
def test_boxint_matches_scan(d, leaf, data):
    bs = data.draw(boxes(d, max_n=30))
    bi = BoxInt([b.lo for b in bs], [b.hi for b in bs], [b.id for b in bs], leaf)
    for _ in range(4):
        q = data.draw(query(d))
        exp = sorted(b.id for b in bs if boxes_intersect(b, q))
        assert sorted(bi.query(q.lo, q.hi, Work())) == exp
        assert bi.any(q.lo, q.hi, Work()) == bool(exp)


def test_pairfind_single_pair():
    bs = [B(1, (0, 0, 0), (4, 4, 4)), B(2, (2, 2, 2), (6, 6, 6)), B(3, (20, 20, 20), (21, 21, 21))]
    s = BpiStructure(bs, Fraction(1, 2))
    cell = s.canonical_cell(B(0, (2, 2, 2), (4, 4, 4)))
    assert [r.pair for r in s.pairfind_query(cell)] == [(1, 2)]
    with pytest.raises(UsageError):
        s.pairfind_query((99, 99, 99))


def test_pairfind_skips_pairs_cornered_elsewhere():
    bs = [B(1, (0, 0, 0), (10, 10, 10)), B(2, (0, 0, 0), (10, 10, 10)), B(3, (5, 5, 5), (6, 6, 6))]
    s = BpiStructure(bs, Fraction(1, 3))
    for cell in s.marked:
        for r in s.pairfind_query(cell):
            a, b = (bs[i - 1] for i in r.pair)
            corner = tuple(max(x, y) for x, y in zip(a.lo, b.lo))
            assert s.canonical_cell(B(0, corner, corner)) == cell


@given(st.integers(3, 5), st.sampled_from([0, 8]), st.data())
def test_pairfind_partitions_all_pairs(d, leaf, data):
    bs = data.draw(boxes(d, max_n=25))
    s = BpiStructure(bs, Fraction(1, 2), leaf, d=d)
    by_cell = oracle_pair_cells(bs, chosen(s))
    assert set(by_cell) == set(s.marked)
    for cell, pairs in by_cell.items():
        got = [r.pair for r in s.pairfind_query(cell)]
        assert len(got) == len(set(got))
        assert set(got) == pairs


# -- full query ------------------------------------------------------------------------

def test_case1_example():
    bs = [B(1, (0, 0, 0), (4, 4, 4)), B(2, (2, 2, 2), (6, 6, 6))]
    s = BpiStructure(bs, Fraction(1, 2))
    got = s.query(B(0, (-10, -10, -10), (10, 10, 10)))
    assert [(r.pair, r.tag) for r in got] == [((1, 2), Tag.HD_CASE1)]


def test_case2_example():
    # the query's lower x-facet sits inside the slab holding box 2's facet
    bs = [B(1, (0, 0, 0), (10, 10, 10)), B(2, (3, 3, 3), (5, 5, 5))]
    s = BpiStructure(bs, Fraction(1, 2))
    got = s.query(B(0, (4, 0, 0), (4, 10, 10)))
    assert [r.pair for r in got] == [(1, 2)]


def test_boundary_touch_needs_left_boundary_case():
    # box 1 ends exactly on a chosen value; box 2 contains it; neither has a
    # facet strictly inside the query's slab and they do not both span it
    bs = [B(1, (0, 0, 0), (4, 9, 9)), B(2, (4, 0, 0), (8, 9, 9)), B(3, (4, 1, 1), (6, 2, 2)),
          B(4, (1, 5, 5), (2, 6, 6))]
    for delta in (Fraction(1, 3), Fraction(1, 2), Fraction(3, 4)):
        s = BpiStructure(bs, delta, leaf=0)
        for qlo in range(0, 9):
            for qhi in range(qlo, 9):
                q = B(0, (qlo, 0, 0), (qhi, 9, 9))
                assert {r.pair for r in s.query(q)} == oracle_pairs(bs, q)


@given(st.integers(3, 4), st.sampled_from(["1/d", "1/2", "3/4"]), st.data())
def test_full_recursion_matches_oracle(d, dl, data):
    bs = data.draw(boxes(d, max_n=18, R=10, ext=6))
    delta = Fraction(1, d) if dl == "1/d" else Fraction(dl)
    s = BpiStructure(bs, delta, leaf=0, d=d)
    for _ in range(3):
        q = data.draw(query(d, R=10, ext=8))
        got = [r.pair for r in s.query(q)]
        assert len(got) == len(set(got))
        assert set(got) == oracle_pairs(bs, q)


def test_generated_corpus_all_deltas():
    for i in range(30):
        d = 3 + i % 3
        bs = generate(i, 5 + (i * 13) % 50, d, DISTRIBUTIONS[i % 5], 32)
        for delta in (Fraction(1, d), Fraction(1, 2), Fraction(3, 4)):
            s = BpiStructure(bs, delta)
            for q in generate_queries(i, 3, d, 32):
                assert {r.pair for r in query_bpi(s, q)} == oracle_pairs(bs, q)


def test_materialize_and_stats():
    bs = generate(5, 60, 3, "uniform", 64)
    s = BpiStructure(bs, Fraction(1, 2))
    before = s.total_cells()
    s.materialize()
    st_ = s.stats()
    assert s.total_cells() >= before
    assert st_["marked"] == len(oracle_marked_cells(bs, chosen(s)))
    # the structure still answers correctly after materializing
    for q in generate_queries(5, 5, 3, 64):
        assert {r.pair for r in s.query(q)} == oracle_pairs(bs, q)
