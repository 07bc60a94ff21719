"""Partially persistent sorted linked list built by a sweep.

Each element lives during a closed time interval ``[lo, hi]``.  The list is
swept over time once; every past version stays readable.  Node copying keeps
updates O(1) amortized: a node has room for two versioned ``next``
overrides, and a full node is copied, which in turn updates its
predecessor.

Versions are addressed by time: the version at an event time ``c`` holds the
elements with ``lo <= c <= hi``; a time strictly between two events sees the
set after the deletions of the earlier event.
"""

from __future__ import annotations

from bisect import bisect_left
from typing import Iterator, List, Optional, Sequence, Tuple

from .counters import Work

_HEAD_KEY = ()  # sorts before every tuple key


class _Node:
    __slots__ = ("key", "item", "nxt", "born", "v1", "n1", "v2", "n2")

    def __init__(self, key, item, nxt, born: int) -> None:
        self.key = key
        self.item = item
        self.nxt = nxt
        self.born = born
        self.v1 = -1
        self.n1 = None
        self.v2 = -1
        self.n2 = None

    def next_at(self, v: int) -> Optional["_Node"]:
        if self.v2 >= 0 and self.v2 <= v:
            return self.n2
        if self.v1 >= 0 and self.v1 <= v:
            return self.n1
        return self.nxt


class PersistentList:
    """Sorted by ``key`` (tuples, unique).  ``probes`` are ``(time, key)``
    pairs resolved at build: ``entry(i)`` is the first element with key at
    least the probe key in the version at the probe time."""

    def __init__(self, items: Sequence[Tuple[int, int, tuple, int]],
                 probes: Sequence[Tuple[int, tuple]] = ()) -> None:
        events = sorted({it[0] for it in items} | {it[1] for it in items})
        self.times = events
        ins = {}
        dels = {}
        for lo, hi, key, item in items:
            ins.setdefault(lo, []).append((key, item))
            dels.setdefault(hi, []).append(key)
        # probes bucketed by (event index, phase): phase 0 after inserts
        pending = {}
        self._entries: List[Tuple[int, Optional[_Node]]] = [(-1, None)] * len(probes)
        for i, (t, key) in enumerate(probes):
            slot = self._slot(t)
            if slot is not None:
                pending.setdefault(slot, []).append((i, key))
        head = _Node(_HEAD_KEY, -1, None, 0)
        self._keys: List[tuple] = []
        self._live = {}
        self._head = head
        self.heads: List[_Node] = []
        self.count = 1
        for idx, c in enumerate(events):
            ver = 2 * idx
            for key, item in sorted(ins.get(c, ())):
                self._insert(key, item, ver)
            self.heads.append(self._head)
            self._resolve(pending.get(ver, ()), ver)
            ver += 1
            for key in dels.get(c, ()):
                self._delete(key, ver)
            self.heads.append(self._head)
            self._resolve(pending.get(ver, ()), ver)
        del self._keys, self._live

    # -- build ------------------------------------------------------------------

    def _slot(self, t: int) -> Optional[int]:
        k = bisect_left(self.times, t)
        if k < len(self.times) and self.times[k] == t:
            return 2 * k
        if k == 0:
            return None
        return 2 * (k - 1) + 1

    def _pred_live(self, pos: int) -> _Node:
        return self._head if pos == 0 else self._live[self._keys[pos - 1]]

    def _set_next(self, node: _Node, pos: int, target, ver: int) -> None:
        """Point live ``node`` (at sorted position ``pos``; -1 for head) to ``target``."""
        while True:
            if node.born == ver and node.v1 < 0:
                node.nxt = target
                return
            if node.v2 >= 0:
                if node.v2 == ver:
                    node.n2 = target
                    return
            elif node.v1 >= 0:
                if node.v1 == ver:
                    node.n1 = target
                else:
                    node.v2, node.n2 = ver, target
                return
            else:
                node.v1, node.n1 = ver, target
                return
            copy = _Node(node.key, node.item, target, ver)
            self.count += 1
            if pos < 0:
                self._head = copy
                return
            self._live[node.key] = copy
            target = copy
            node = self._pred_live(pos)
            pos -= 1

    def _insert(self, key: tuple, item: int, ver: int) -> None:
        pos = bisect_left(self._keys, key)
        pred = self._pred_live(pos)
        node = _Node(key, item, pred.next_at(ver), ver)
        self.count += 1
        self._keys.insert(pos, key)
        self._live[key] = node
        self._set_next(pred, pos - 1, node, ver)

    def _delete(self, key: tuple, ver: int) -> None:
        pos = bisect_left(self._keys, key)
        node = self._live.pop(key)
        del self._keys[pos]
        pred = self._pred_live(pos)
        self._set_next(pred, pos - 1, node.next_at(ver), ver)

    def _resolve(self, probes, ver: int) -> None:
        for i, key in probes:
            pos = bisect_left(self._keys, key)
            node = self._live[self._keys[pos]] if pos < len(self._keys) else None
            self._entries[i] = (ver, node)

    # -- queries ----------------------------------------------------------------

    def version_at(self, t: int) -> int:
        s = self._slot(t)
        return -1 if s is None else s

    def entry(self, i: int) -> Tuple[int, Optional[_Node]]:
        return self._entries[i]

    def walk(self, ver: int, node: Optional[_Node], work: Work) -> Iterator[Tuple[tuple, int]]:
        """Yield ``(key, item)`` from ``node`` onward in version ``ver``."""
        while node is not None:
            work.steps += 1
            yield node.key, node.item
            node = node.next_at(ver)

    def at(self, t: int, work: Work) -> Iterator[Tuple[tuple, int]]:
        """All elements alive at time ``t`` in key order."""
        ver = self.version_at(t)
        if ver < 0:
            return iter(())
        return self.walk(ver, self.heads[ver].next_at(ver), work)

    def items_at(self, t: int) -> List[int]:
        return [item for _, item in self.at(t, Work())]
