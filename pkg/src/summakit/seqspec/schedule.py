"""Block schedules: sequences built from phases whose lengths grow with the block index."""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from math import gcd
from typing import Iterator


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class PhaseLength:
    """Length of a phase in block ``i``: ``coef * base**i + const``.

    ``PhaseLength.geometric(100)`` is ``100**i``; ``PhaseLength.fixed(3)`` is 3.
    """

    coef: int = 0
    base: int = 1
    const: int = 0

    def __post_init__(self):
        if self.coef < 0 or self.base < 1:
            raise ValueError("phase length needs coef >= 0 and base >= 1")
        if self.coef == 0 or self.base == 1:
            # canonical form for bounded lengths
            object.__setattr__(self, "const", self.coef + self.const)
            object.__setattr__(self, "coef", 0)
            object.__setattr__(self, "base", 1)
        if self(1) < 0:
            raise ValueError("phase length is negative at i=1")

    @classmethod
    def geometric(cls, base: int) -> "PhaseLength":
        return cls(1, base, 0)

    @classmethod
    def fixed(cls, n: int) -> "PhaseLength":
        return cls(0, 1, n)

    def __call__(self, i: int) -> int:
        return self.coef * self.base ** i + self.const

    @property
    def growth(self) -> int:
        """Geometric growth ratio; 1 for lengths that stay bounded."""
        return self.base if self.coef and self.base > 1 else 1


@dataclass(frozen=True)
class Phase:
    pattern: tuple
    length: PhaseLength

    def __post_init__(self):
        if not self.pattern:
            raise ValueError("phase pattern must be nonempty")
        object.__setattr__(self, "pattern", tuple(float(v) for v in self.pattern))

    @property
    def mean(self) -> float:
        return sum(self.pattern) / len(self.pattern)


@dataclass(frozen=True)
class BlockSchedule:
    """Block ``i`` (``i >= 1``) is the concatenation of every phase, in order,
    each phase's pattern repeated cyclically from its own first position.

    Boundaries ``b_i`` (end of block ``i``) are exact Python integers.
    """

    phases: tuple
    _ends: list = field(default_factory=list, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if not self.phases:
            raise ValueError("a schedule needs at least one phase")
        object.__setattr__(self, "phases", tuple(self.phases))
        if self.block_length(1) < 1:
            raise ValueError("blocks must be nonempty")

    def block_length(self, i: int) -> int:
        return sum(ph.length(i) for ph in self.phases)

    @property
    def periodic(self) -> bool:
        """True when every phase has a fixed length (the sequence is periodic)."""
        return all(ph.length.growth == 1 for ph in self.phases)

    @property
    def period(self) -> int:
        # only meaningful when periodic
        return self.block_length(1)

    @property
    def growth(self) -> int:
        return max(ph.length.growth for ph in self.phases)

    def _grow(self, n: int) -> list:
        ends = self._ends
        if not ends:
            ends.append(0)
        while ends[-1] < n:
            ends.append(ends[-1] + self.block_length(len(ends)))
        return ends

    def boundary(self, i: int) -> int:
        """``b_i``: index of the last term of block ``i``; ``b_0 = 0``."""
        if i < 0:
            raise ValueError("block index must be >= 0")
        if self.periodic:
            return i * self.period
        ends = self._ends
        if not ends:
            ends.append(0)
        while len(ends) <= i:
            ends.append(ends[-1] + self.block_length(len(ends)))
        return ends[i]

    def boundaries_upto(self, n: int) -> list:
        """All ``b_i <= n`` with ``i >= 1``."""
        if self.periodic:
            return [i * self.period for i in range(1, n // self.period + 1)]
        ends = self._grow(n)
        return [b for b in ends[1:] if b <= n]

    def block_of(self, k: int) -> int:
        if self.periodic:
            return (k - 1) // self.period + 1
        ends = self._grow(k)
        return bisect.bisect_left(ends, k)

    def locate(self, k: int):
        """Return ``(block, phase_index, offset, phase_start)`` for index ``k``."""
        if k < 1:
            raise ValueError("indices start at 1")
        i = self.block_of(k)
        start = self.boundary(i - 1) + 1
        for j, ph in enumerate(self.phases):
            length = ph.length(i)
            if k < start + length:
                return i, j, k - start, start
            start += length
        raise AssertionError("index beyond its block")  # pragma: no cover

    def runs(self, n: int, phase: int | None = None) -> Iterator[tuple]:
        """Yield ``(block, phase_index, start, end)`` for nonempty runs with ``start <= n``.

        ``end`` is the true run end and may exceed ``n``.
        """
        if self.periodic:
            raise ValueError("runs() on a periodic schedule is unbounded in count; compile it instead")
        i = 1
        start = 1
        while start <= n:
            for j, ph in enumerate(self.phases):
                length = ph.length(i)
                if length and start <= n and (phase is None or phase == j):
                    yield i, j, start, start + length - 1
                start += length
            i += 1

    def phase_boundaries_upto(self, n: int) -> list:
        """Sorted run ends and run midpoints up to ``n``; where prefix densities peak."""
        if self.periodic:
            return []
        pts = set()
        for _, _, s, e in self.runs(n):
            for p in (s - 1, (s + e) // 2, e):
                if 1 <= p <= n:
                    pts.add(p)
        return sorted(pts)
