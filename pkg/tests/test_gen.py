import pytest

from boxpairs.gen import DISTRIBUTIONS, generate, generate_queries
from boxpairs.geometry import UsageError


@pytest.mark.parametrize("dist", DISTRIBUTIONS)
@pytest.mark.parametrize("d", [2, 3, 5])
def test_deterministic_and_in_range(dist, d):
    a = generate(7, 80, d, dist, 32)
    assert a == generate(7, 80, d, dist, 32)
    assert [b.id for b in a] == list(range(1, 81))
    for b in a:
        assert b.d == d
        assert all(0 <= l <= h <= 32 for l, h in zip(b.lo, b.hi))


def test_seed_changes_output():
    assert generate(1, 50, 2) != generate(2, 50, 2)


@pytest.mark.parametrize("n", [1, 9, 10, 11, 100, 333])
@pytest.mark.parametrize("d", [2, 4])
def test_degenerate_heavy_has_point_boxes(n, d):
    bs = generate(n, n, d, "degenerate-heavy", 50)
    points = sum(1 for b in bs if b.lo == b.hi)
    assert points * 10 >= n


def test_empty_and_errors():
    assert generate(0, 0, 3) == []
    with pytest.raises(UsageError):
        generate(0, 5, 2, "gaussian")
    with pytest.raises(UsageError):
        generate(0, -1, 2)


def test_queries():
    qs = generate_queries(3, 40, 3, 20)
    assert qs == generate_queries(3, 40, 3, 20)
    assert [q.id for q in qs] == list(range(1, 41))
    assert all(l <= h for q in qs for l, h in zip(q.lo, q.hi))
    assert any(q.lo == q.hi for q in qs)
