"""One entry point over both dimensions."""

from __future__ import annotations

from typing import Dict, Optional, Sequence, Union

from .geometry import Box, UsageError
from .highdim import DEFAULT_DELTA, BpiStructure, check_delta
from .planar import PlanarStructure
from .search import LEAF

Structure = Union[PlanarStructure, BpiStructure]


def build_structure(boxes: Sequence[Box], d: int, delta=None, leaf: int = LEAF) -> Structure:
    """Planar structure for d = 2, the grid structure for d >= 3."""
    for b in boxes:
        if b.d != d:
            raise UsageError("box %d has dimension %d, expected %d" % (b.id, b.d, d))
    if d == 2:
        return PlanarStructure(boxes)
    if d < 2:
        raise UsageError("d must be at least 2")
    return BpiStructure(boxes, DEFAULT_DELTA if delta is None else check_delta(delta, d), leaf, d=d)


def structure_stats(s: Structure, full: bool = True) -> Dict[str, int]:
    """Stored-element counts; ``full`` first builds every lazy part."""
    if isinstance(s, BpiStructure):
        if full:
            s.materialize()
        out = dict(s.stats())
    else:
        out = dict(s.stats())
    out["total"] = s.total_cells()
    return out


def delta_text(s: Structure) -> Optional[str]:
    return str(s.delta) if isinstance(s, BpiStructure) else None
