"""Real-arithmetic operation counters.

Counts are kept per phase so that savings in one stage (normalization,
back substitution) can be compared against costs added in another
(detection). All tallies are in real-arithmetic units: a complex multiply
is 4 real multiplies and 2 real adds, a complex add is 2 real adds.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, fields

PHASES = ("factorization", "normalization", "back-substitution", "detection")


@dataclass
class OpCounts:
    adds: int = 0
    mults: int = 0
    divs: int = 0
    sqrts: int = 0

    def __add__(self, other: OpCounts) -> OpCounts:
        return OpCounts(*(getattr(self, f.name) + getattr(other, f.name) for f in fields(self)))

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.adds, self.mults, self.divs, self.sqrts)


class OpCounter:
    """Tally of real operations, split by pipeline phase.

    The active phase is set with :meth:`phase`, which nests; the innermost
    phase receives the counts. Operations recorded outside any phase go to
    ``"factorization"``.

    Examples
    --------
    >>> c = OpCounter()
    >>> with c.phase("detection"):
    ...     c.record(mults=3, adds=1)
    >>> c["detection"].mults
    3
    """

    enabled = True

    def __init__(self) -> None:
        self._counts = {p: OpCounts() for p in PHASES}
        self._stack = ["factorization"]

    @contextmanager
    def phase(self, name: str):
        if name not in PHASES:
            raise ValueError(f"unknown phase {name!r}; expected one of {PHASES}")
        self._stack.append(name)
        try:
            yield self
        finally:
            self._stack.pop()

    @property
    def current_phase(self) -> str:
        return self._stack[-1]

    def record(self, adds: int = 0, mults: int = 0, divs: int = 0, sqrts: int = 0) -> None:
        c = self._counts[self._stack[-1]]
        c.adds += adds
        c.mults += mults
        c.divs += divs
        c.sqrts += sqrts

    def __getitem__(self, phase: str) -> OpCounts:
        return self._counts[phase]

    def total(self) -> OpCounts:
        out = OpCounts()
        for c in self._counts.values():
            out = out + c
        return out

    def report(self) -> str:
        """Fixed-width text table, one row per phase plus a total row."""
        lines = [f"{'phase':<18}{'adds':>10}{'mults':>10}{'divs':>8}{'sqrts':>8}"]
        for p in PHASES:
            a, m, d, s = self._counts[p].as_tuple()
            lines.append(f"{p:<18}{a:>10}{m:>10}{d:>8}{s:>8}")
        a, m, d, s = self.total().as_tuple()
        lines.append(f"{'total':<18}{a:>10}{m:>10}{d:>8}{s:>8}")
        return "\n".join(lines)


class NullCounter(OpCounter):
    """Counter that discards everything; used in Monte Carlo loops."""

    enabled = False

    def record(self, adds: int = 0, mults: int = 0, divs: int = 0, sqrts: int = 0) -> None:
        pass


def ensure_counter(counter: OpCounter | None) -> OpCounter:
    return NullCounter() if counter is None else counter
