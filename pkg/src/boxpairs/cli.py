"""Command line: gen, build, query, fuzz, bench, stats.

Exit status 0 on success, 1 on a differential mismatch, 2 on bad usage.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from .counters import Work
from .gen import DISTRIBUTIONS, generate, generate_queries
from .geometry import Box, UsageError
from .oracle import oracle_pairs
from .records import dumps, read_boxes, result_record, write_boxes
from .structure import build_structure, delta_text, structure_stats

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        print("%s: error: %s" % (self.prog, message), file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


@contextmanager
def _output(path: Optional[str]):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="\n") as fh:
            yield fh


def _read(path: str, require_ids: bool = True) -> Tuple[int, List[Box], dict]:
    """Instance or structure file: header, boxes, optional trailing stats."""
    try:
        with open(path) as fh:
            lines = [ln for ln in fh if ln.strip()]
    except OSError as e:
        raise UsageError("cannot read %s: %s" % (path, e)) from e
    meta = {}
    if lines:
        try:
            head = json.loads(lines[0])
        except json.JSONDecodeError as e:
            raise UsageError("%s: bad header (%s)" % (path, e)) from e
        if isinstance(head, dict) and "delta" in head:
            meta["delta"] = head.pop("delta")
            lines[0] = dumps(head)
    if lines and lines[-1].lstrip().startswith('{"stats"'):
        lines = lines[:-1]
    d, boxes = read_boxes(lines, require_ids)
    return d, boxes, meta


def _delta(args, meta: dict):
    raw = args.delta if args.delta is not None else meta.get("delta")
    if raw is None:
        return None
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError("bad delta %r" % (raw,)) from e


def _coord_range(boxes: Sequence[Box]) -> int:
    return max([max(b.hi) for b in boxes] + [1])


# -- commands ---------------------------------------------------------------------------

def cmd_gen(args) -> int:
    boxes = generate(args.seed, args.n, args.d, args.dist, args.range, args.max_extent)
    with _output(args.out) as fh:
        write_boxes(fh, args.d, boxes)
    return EXIT_OK


def cmd_build(args) -> int:
    d, boxes, meta = _read(args.infile)
    s = build_structure(boxes, d, _delta(args, meta))
    head = {"d": d, "n": len(boxes)}
    dt = delta_text(s)
    if dt is not None:
        head["delta"] = dt
    with _output(args.out) as fh:
        fh.write(dumps(head) + "\n")
        for b in boxes:
            fh.write(dumps({"id": b.id, "lo": list(b.lo), "hi": list(b.hi)}) + "\n")
        fh.write(dumps({"stats": structure_stats(s)}) + "\n")
    return EXIT_OK


def _queries(args, d: int, boxes: Sequence[Box]) -> List[Box]:
    if args.queries:
        qd, qs, _ = _read(args.queries, require_ids=False)
        if qd != d:
            raise UsageError("queries have dimension %d, instance %d" % (qd, d))
        return qs
    return generate_queries(args.seed, args.trials, d, _coord_range(boxes))


def cmd_query(args) -> int:
    d, boxes, meta = _read(args.infile)
    s = build_structure(boxes, d, _delta(args, meta))
    qs = _queries(args, d, boxes)
    with _output(args.out) as fh:
        for q in qs:
            work = Work()
            reps = s.query(q, work)
            fh.write(result_record(q.id, reps, work.as_dict()) + "\n")
    return EXIT_OK


def cmd_stats(args) -> int:
    d, boxes, meta = _read(args.infile)
    s = build_structure(boxes, d, _delta(args, meta))
    with _output(args.out) as fh:
        fh.write(dumps(structure_stats(s)) + "\n")
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.infile:
        d, boxes, meta = _read(args.infile)
    else:
        d, meta = args.d, {}
        boxes = generate(args.seed, args.n, d, args.dist, args.range, args.max_extent)
    t0 = time.perf_counter()
    s = build_structure(boxes, d, _delta(args, meta))
    build_s = time.perf_counter() - t0
    qs = _queries(args, d, boxes)
    with _output(args.out) as fh:
        fh.write("# n=%d d=%d build_seconds=%.3f\n" % (len(boxes), d, build_s))
        fh.write("%6s %8s %10s %10s %10s %10s %10s\n" % ("qid", "k", "nodes", "steps", "cands", "total", "usec"))
        for q in qs:
            work = Work()
            t = time.perf_counter()
            reps = s.query(q, work)
            us = (time.perf_counter() - t) * 1e6
            fh.write("%6d %8d %10d %10d %10d %10d %10.0f\n" % (
                q.id, len(reps), work.nodes, work.steps, work.candidates, work.total, us))
    return EXIT_OK


def _fails(d: int, boxes: Sequence[Box], q: Box, delta, s=None) -> Optional[str]:
    """Why the structure disagrees with the brute-force scan, or None."""
    try:
        if s is None:
            s = build_structure(boxes, d, delta)
        got = [r.pair for r in s.query(q)]
    except UsageError:
        raise
    except Exception as e:  # crash counts as a mismatch
        return "%s: %s" % (type(e).__name__, e)
    want = oracle_pairs(boxes, q)
    if len(set(got)) != len(got):
        return "duplicate pairs reported"
    if set(got) != want:
        return "missing %s, extra %s" % (sorted(want - set(got)), sorted(set(got) - want))
    return None


def minimize(boxes: Sequence[Box], still_fails: Callable[[List[Box]], bool]) -> List[Box]:
    """Greedily drop boxes while the failure persists."""
    cur = list(boxes)
    changed = True
    while changed:
        changed = False
        k = 0
        while k < len(cur):
            trial = cur[:k] + cur[k + 1:]
            if still_fails(trial):
                cur = trial
                changed = True
            else:
                k += 1
    return cur


def _renumber(boxes: Sequence[Box]) -> List[Box]:
    return [Box(k + 1, b.lo, b.hi) for k, b in enumerate(sorted(boxes, key=lambda b: b.id))]


def cmd_fuzz(args) -> int:
    dists = DISTRIBUTIONS if args.dist == "all" else (args.dist,)
    delta = Fraction(args.delta) if args.delta is not None else None
    rng = random.Random("fuzz/%d/%d" % (args.seed, args.d))
    for trial in range(args.trials):
        dist = dists[trial % len(dists)]
        n = rng.randint(1, max(1, args.n))
        seed = rng.randrange(1 << 30)
        boxes = generate(seed, n, args.d, dist, args.range)
        try:
            s = build_structure(boxes, args.d, delta)
        except UsageError:
            raise
        except Exception:
            s = None  # _fails rebuilds and reports the crash
        for q in generate_queries(seed, args.queries_per, args.d, args.range):
            why = _fails(args.d, boxes, q, delta, s)
            if why is None:
                continue
            small = minimize(boxes, lambda bs: _fails(args.d, bs, q, delta) is not None)
            ren = _renumber(small)
            if _fails(args.d, ren, q, delta) is not None:
                small = ren
            print("mismatch in trial %d (seed %d, dist %s, n %d): %s" % (trial, seed, dist, n, why))
            print("minimized instance (%d boxes) and query:" % len(small))
            write_boxes(sys.stdout, args.d, small)
            print(dumps({"query": {"lo": list(q.lo), "hi": list(q.hi)}}))
            print("reason after minimizing: %s" % _fails(args.d, small, q, delta))
            return EXIT_MISMATCH
    print("%d trials, 0 mismatches" % args.trials)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------

def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="boxpairs", description="Report intersecting box pairs inside query boxes.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def common(sp, infile=False, gen=False):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        sp.add_argument("--delta", default=None, help="grid exponent for d >= 3 (default 1/2)")
        if infile:
            sp.add_argument("--in", dest="infile", required=infile == "required", default=None)
        if gen:
            sp.add_argument("--n", type=int, default=100)
            sp.add_argument("--d", type=int, default=2)
            sp.add_argument("--dist", default="uniform")
            sp.add_argument("--range", type=int, default=100, help="coordinates lie in [0, range]")
            sp.add_argument("--max-extent", type=int, default=-1)

    sp = sub.add_parser("gen", help="generate an instance")
    common(sp, gen=True)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("build", help="build and write a structure file with stats")
    common(sp, infile="required")
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("query", help="answer queries")
    common(sp, infile="required")
    sp.add_argument("--queries", default=None, help="query file (default: --trials generated queries)")
    sp.add_argument("--trials", type=int, default=10)
    sp.set_defaults(func=cmd_query)

    sp = sub.add_parser("fuzz", help="differential test against brute force")
    common(sp, gen=True)
    sp.set_defaults(dist="all", n=50)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--queries-per", type=int, default=3)
    sp.set_defaults(func=cmd_fuzz)

    sp = sub.add_parser("bench", help="per-query counters and latency")
    common(sp, infile=True, gen=True)
    sp.add_argument("--queries", default=None)
    sp.add_argument("--trials", type=int, default=20)
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("stats", help="structure size statistics")
    common(sp, infile="required")
    sp.set_defaults(func=cmd_stats)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
