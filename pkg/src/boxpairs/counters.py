"""Instrumented work counters threaded through every query path."""


class Work:
    __slots__ = ("nodes", "steps", "candidates")

    def __init__(self) -> None:
        self.nodes = 0
        self.steps = 0
        self.candidates = 0

    @property
    def total(self) -> int:
        return self.nodes + self.steps + self.candidates

    def as_dict(self) -> dict:
        return {"nodes": self.nodes, "steps": self.steps,
                "candidates": self.candidates, "total": self.total}

    def __repr__(self) -> str:
        return "Work(%s)" % ", ".join("%s=%d" % kv for kv in self.as_dict().items())
