"""Seeded instance and query generators."""

from __future__ import annotations

import random
from typing import List

from .geometry import Box, UsageError

DISTRIBUTIONS = ("uniform", "nested", "slabs", "clustered", "degenerate-heavy")


def _clip(v: int, R: int) -> int:
    return 0 if v < 0 else R if v > R else v


def _box(id: int, lo: List[int], hi: List[int], R: int) -> Box:
    lo = [_clip(a, R) for a in lo]
    hi = [_clip(b, R) for b in hi]
    return Box(id, tuple(min(a, b) for a, b in zip(lo, hi)), tuple(max(a, b) for a, b in zip(lo, hi)))


def _uniform(rng: random.Random, n: int, d: int, R: int, ext: int) -> List[Box]:
    out = []
    for i in range(n):
        lo = [rng.randint(0, R) for _ in range(d)]
        out.append(_box(i + 1, lo, [a + rng.randint(0, ext) for a in lo], R))
    return out


def _nested(rng: random.Random, n: int, d: int, R: int, ext: int) -> List[Box]:
    out = []
    i = 0
    while i < n:
        lo = [rng.randint(0, R // 3) for _ in range(d)]
        hi = [rng.randint(2 * R // 3, R) for _ in range(d)]
        for _ in range(rng.randint(1, 6)):
            if i == n:
                break
            out.append(_box(i + 1, lo, hi, R))
            i += 1
            lo = [a + rng.randint(0, max(1, (b - a) // 4)) for a, b in zip(lo, hi)]
            hi = [b - rng.randint(0, max(1, (b - a) // 4)) for a, b in zip(lo, hi)]
            if any(a > b for a, b in zip(lo, hi)):
                break
    return out


def _slabs(rng: random.Random, n: int, d: int, R: int, ext: int) -> List[Box]:
    out = []
    thin = max(0, R // 16)
    for i in range(n):
        long_axis = rng.randrange(d)
        lo, hi = [], []
        for t in range(d):
            if t == long_axis:
                a = rng.randint(0, R // 8)
                lo.append(a)
                hi.append(R - rng.randint(0, R // 8))
            else:
                a = rng.randint(0, R)
                lo.append(a)
                hi.append(a + rng.randint(0, thin))
        out.append(_box(i + 1, lo, hi, R))
    return out


def _clustered(rng: random.Random, n: int, d: int, R: int, ext: int) -> List[Box]:
    centers = [[rng.randint(0, R) for _ in range(d)] for _ in range(rng.randint(1, 4))]
    spread = max(1, ext // 2)
    out = []
    for i in range(n):
        c = rng.choice(centers)
        lo = [a + rng.randint(-spread, spread) for a in c]
        out.append(_box(i + 1, lo, [a + rng.randint(0, spread) for a in lo], R))
    return out


def _degenerate(rng: random.Random, n: int, d: int, R: int, ext: int) -> List[Box]:
    out: List[Box] = []
    for i in range(n):
        roll = rng.random()
        if out and roll < 0.15:
            # exact duplicate of an earlier box
            b = rng.choice(out)
            out.append(Box(i + 1, b.lo, b.hi))
        elif out and roll < 0.35:
            # touching: shares a face with an earlier box
            b = rng.choice(out)
            t = rng.randrange(d)
            lo = [rng.randint(max(0, b.lo[s] - ext), b.hi[s]) for s in range(d)]
            hi = [a + rng.randint(0, ext) for a in lo]
            lo[t] = b.hi[t]
            hi[t] = b.hi[t] + rng.randint(0, ext)
            out.append(_box(i + 1, lo, hi, R))
        else:
            lo = [rng.randint(0, R) for _ in range(d)]
            hi = [a + rng.randint(0, ext) for a in lo]
            flat = rng.random()
            if flat < 0.5:
                for t in range(d):
                    if rng.random() < 0.5:
                        hi[t] = lo[t]
            out.append(_box(i + 1, lo, hi, R))
    # guarantee at least 10% zero-extent boxes (points)
    need = -(-n // 10)
    have = [k for k, b in enumerate(out) if b.lo == b.hi]
    k = 0
    while len(have) < need:
        if out[k].lo != out[k].hi:
            out[k] = Box(out[k].id, out[k].lo, out[k].lo)
            have.append(k)
        k += 1
    return out


_GENERATORS = {
    "uniform": _uniform,
    "nested": _nested,
    "slabs": _slabs,
    "clustered": _clustered,
    "degenerate-heavy": _degenerate,
}


def generate(seed: int, n: int, d: int, dist: str = "uniform", coord_range: int = 100,
             max_extent: int = -1) -> List[Box]:
    """Boxes with ids ``1..n`` and coordinates in ``[0, coord_range]``.

    ``max_extent`` bounds the side length of random boxes (default a
    quarter of the range); the nested and slab shapes ignore it.
    """
    if dist not in _GENERATORS:
        raise UsageError("unknown distribution %r (choose from %s)" % (dist, ", ".join(DISTRIBUTIONS)))
    if n < 0 or d < 1 or coord_range < 0:
        raise UsageError("need n >= 0, d >= 1, coord_range >= 0")
    ext = max(1, coord_range // 4) if max_extent < 0 else max_extent
    rng = random.Random("%d/%d/%d/%s/%d/%d" % (seed, n, d, dist, coord_range, ext))
    return _GENERATORS[dist](rng, n, d, coord_range, ext)


def generate_queries(seed: int, count: int, d: int, coord_range: int = 100,
                     max_extent: int = -1) -> List[Box]:
    """Query boxes with ids ``1..count``; mixes points, thin and wide queries."""
    rng = random.Random("queries/%d/%d/%d/%d" % (seed, count, d, coord_range))
    if max_extent < 0:
        max_extent = max(1, coord_range // 2)
    out = []
    for i in range(count):
        kind = rng.random()
        lo = [rng.randint(-1, coord_range + 1) for _ in range(d)]
        if kind < 0.15:
            hi = list(lo)
        elif kind < 0.35:
            hi = [a + (0 if rng.random() < 0.5 else rng.randint(0, max_extent)) for a in lo]
        else:
            hi = [a + rng.randint(0, max_extent) for a in lo]
        out.append(Box(i + 1, tuple(lo), tuple(hi)))
    return out
