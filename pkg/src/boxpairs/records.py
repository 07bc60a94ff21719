"""Line-delimited JSON instance, query and result files."""

from __future__ import annotations

import json
from typing import IO, Iterable, List, Sequence, Tuple

from .geometry import Box, PairReport, UsageError


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def write_boxes(fh: IO[str], d: int, boxes: Sequence[Box]) -> None:
    fh.write(dumps({"d": d, "n": len(boxes)}) + "\n")
    for b in boxes:
        fh.write(dumps({"id": b.id, "lo": list(b.lo), "hi": list(b.hi)}) + "\n")


def read_boxes(lines: Iterable[str], require_ids: bool = True) -> Tuple[int, List[Box]]:
    """Parse a header line and box records; returns ``(d, boxes)``.

    With ``require_ids`` the ids must be exactly ``1..n`` in some order."""
    recs = []
    for k, line in enumerate(lines, 1):
        line = line.strip()
        if not line:
            continue
        try:
            recs.append(json.loads(line))
        except json.JSONDecodeError as e:
            raise UsageError("line %d: not JSON (%s)" % (k, e)) from e
    if not recs or not isinstance(recs[0], dict) or set(recs[0]) != {"d", "n"}:
        raise UsageError("first record must be a header {\"d\": .., \"n\": ..}")
    d, n = recs[0]["d"], recs[0]["n"]
    if type(d) is not int or type(n) is not int or d < 1 or n < 0:
        raise UsageError("bad header %r" % (recs[0],))
    boxes = []
    for r in recs[1:]:
        if not isinstance(r, dict) or set(r) != {"id", "lo", "hi"}:
            raise UsageError("bad box record %r" % (r,))
        lo, hi = r["lo"], r["hi"]
        if type(r["id"]) is not int or not isinstance(lo, list) or not isinstance(hi, list):
            raise UsageError("bad box record %r" % (r,))
        if len(lo) != d or len(hi) != d:
            raise UsageError("box %r does not have dimension %d" % (r["id"], d))
        boxes.append(Box(r["id"], tuple(lo), tuple(hi)))
    if len(boxes) != n:
        raise UsageError("header says n=%d but found %d boxes" % (n, len(boxes)))
    ids = [b.id for b in boxes]
    if len(set(ids)) != n:
        raise UsageError("duplicate box ids")
    if require_ids and sorted(ids) != list(range(1, n + 1)):
        raise UsageError("box ids must be 1..n")
    return d, boxes


def result_record(qid: int, reports: Sequence[PairReport], counters: dict) -> str:
    reports = sorted(reports)
    return dumps({"qid": qid, "pairs": [[r.i, r.j] for r in reports],
                  "tags": [r.tag.name for r in reports], "counters": counters})
