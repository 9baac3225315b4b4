"""Finite descriptions of infinite real sequences, indexed from 1."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterator

import numpy as np

from .schedule import BlockSchedule, lcm
from .sets import IndexSet, finite_members, set_period

CHUNK = 1 << 20


# -- override rules -----------------------------------------------------------

@dataclass(frozen=True)
class ConstantValue:
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))

    def at(self, k: int) -> float:
        return self.value

    def at_array(self, ks):
        return np.full(len(ks), self.value)

    def shifted(self, t: int):
        return self


@dataclass(frozen=True)
class IndexValue:
    """The term at ``k`` is ``k`` itself (unbounded on infinite sets)."""

    def at(self, k: int) -> float:
        return float(k)

    def at_array(self, ks):
        return np.asarray(ks, dtype=np.float64)


@dataclass(frozen=True)
class ParityValue:
    value_if_odd: float
    value_if_even: float

    def __post_init__(self):
        object.__setattr__(self, "value_if_odd", float(self.value_if_odd))
        object.__setattr__(self, "value_if_even", float(self.value_if_even))

    def at(self, k: int) -> float:
        return self.value_if_odd if k % 2 else self.value_if_even

    def at_array(self, ks):
        return np.where(ks % 2 == 1, self.value_if_odd, self.value_if_even)

    @property
    def values(self):
        return frozenset((self.value_if_odd, self.value_if_even))


def _as_floats(values) -> tuple:
    out = tuple(float(v) for v in values)
    if not all(np.isfinite(out)):
        raise ValueError("sequence values must be finite reals")
    return out


# -- sequence kinds -----------------------------------------------------------

class SequenceSpec:
    """Base class; subclasses are immutable and compare structurally."""

    def term(self, k: int) -> float:
        raise NotImplementedError

    def values_at(self, ks: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def terms(self, start: int, stop: int) -> np.ndarray:
        """Terms with indices ``start, ..., stop - 1``."""
        return self.values_at(np.arange(start, stop, dtype=np.int64))

    def chunks(self, n: int, chunk: int = CHUNK) -> Iterator[tuple]:
        """Yield ``(start, array)`` covering indices ``1..n`` in bounded memory."""
        start = 1
        while start <= n:
            stop = min(n + 1, start + chunk)
            yield start, self.terms(start, stop)
            start = stop

    def bound(self) -> float | None:
        """A finite sup-norm bound, or ``None`` when the sequence is unbounded."""
        raise NotImplementedError

    def value_set(self) -> frozenset | None:
        """Finite superset of the attained values, when one is known."""
        return None

    def period(self) -> int | None:
        return None

    def eventual_constant(self) -> float | None:
        return None

    def children(self) -> tuple:
        return ()

    def schedules(self) -> list:
        out = []
        for c in self.children():
            for s in c.schedules():
                if s not in out:
                    out.append(s)
        return out


@dataclass(frozen=True)
class Constant(SequenceSpec):
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", _as_floats([self.value])[0])

    def term(self, k):
        return self.value

    def values_at(self, ks):
        return np.full(len(ks), self.value)

    def bound(self):
        return abs(self.value)

    def value_set(self):
        return frozenset({self.value})

    def period(self):
        return 1

    def eventual_constant(self):
        return self.value


@dataclass(frozen=True)
class Periodic(SequenceSpec):
    """``values[0], values[1], ...`` repeated; ``Periodic((1, 0))`` is 1, 0, 1, 0, ..."""

    values: tuple

    def __post_init__(self):
        if not self.values:
            raise ValueError("periodic spec needs at least one value")
        object.__setattr__(self, "values", _as_floats(self.values))

    def term(self, k):
        return self.values[(k - 1) % len(self.values)]

    def values_at(self, ks):
        return np.asarray(self.values)[(np.asarray(ks) - 1) % len(self.values)]

    def bound(self):
        return max(abs(v) for v in self.values)

    def value_set(self):
        return frozenset(self.values)

    def period(self):
        return len(self.values)

    def eventual_constant(self):
        return self.values[0] if len(set(self.values)) == 1 else None


@dataclass(frozen=True)
class Blocks(SequenceSpec):
    schedule: BlockSchedule

    def term(self, k):
        _, j, off, _ = self.schedule.locate(k)
        pattern = self.schedule.phases[j].pattern
        return pattern[off % len(pattern)]

    def values_at(self, ks):
        ks = np.asarray(ks, dtype=np.int64)
        out = np.zeros(len(ks))
        if len(ks) == 0:
            return out
        sched = self.schedule
        if sched.periodic:
            pos = (ks - 1) % sched.period
            start = 0
            for ph in sched.phases:
                length = ph.length(1)
                sel = (pos >= start) & (pos < start + length)
                out[sel] = np.asarray(ph.pattern)[(pos[sel] - start) % len(ph.pattern)]
                start += length
            return out
        runs = list(sched.runs(int(ks.max())))
        starts = np.array([r[2] for r in runs], dtype=np.int64)
        phase = np.array([r[1] for r in runs], dtype=np.int64)
        idx = np.searchsorted(starts, ks, side="right") - 1
        for j, ph in enumerate(sched.phases):
            sel = phase[idx] == j
            off = ks[sel] - starts[idx[sel]]
            out[sel] = np.asarray(ph.pattern)[off % len(ph.pattern)]
        return out

    def bound(self):
        return max(abs(v) for ph in self.schedule.phases for v in ph.pattern)

    def value_set(self):
        return frozenset(v for ph in self.schedule.phases for v in ph.pattern)

    def period(self):
        if not self.schedule.periodic:
            return None
        return self.schedule.period

    def eventual_constant(self):
        vals = self.value_set()
        return next(iter(vals)) if len(vals) == 1 else None

    def schedules(self):
        return [self.schedule]


@dataclass(frozen=True)
class Overlay(SequenceSpec):
    """``base`` with each ``(index set, rule)`` override applied in order; later overrides win."""

    base: SequenceSpec
    overrides: tuple

    def __post_init__(self):
        object.__setattr__(self, "overrides", tuple((s, r) for s, r in self.overrides))

    def term(self, k):
        for s, rule in reversed(self.overrides):
            if s.contains(k):
                return rule.at(k)
        return self.base.term(k)

    def values_at(self, ks):
        ks = np.asarray(ks, dtype=np.int64)
        out = self.base.values_at(ks).astype(np.float64, copy=True)
        for s, rule in self.overrides:
            hit = s.contains_array(ks)
            if hit.any():
                out[hit] = rule.at_array(ks[hit])
        return out

    def bound(self):
        b = self.base.bound()
        if b is None:
            return None
        for s, rule in self.overrides:
            if isinstance(rule, IndexValue):
                ms = finite_members(s)
                if ms is None:
                    return None
                b = max([b] + [float(m) for m in ms])
            elif isinstance(rule, ParityValue):
                b = max(b, abs(rule.value_if_odd), abs(rule.value_if_even))
            else:
                b = max(b, abs(rule.value))
        return b

    def value_set(self):
        vals = self.base.value_set()
        if vals is None:
            return None
        vals = set(vals)
        for s, rule in self.overrides:
            if isinstance(rule, IndexValue):
                ms = finite_members(s)
                if ms is None:
                    return None
                vals.update(float(m) for m in ms)
            elif isinstance(rule, ParityValue):
                vals.update(rule.values)
            else:
                vals.add(rule.value)
        return frozenset(vals)

    def period(self):
        p = self.base.period()
        if p is None:
            return None
        for s, rule in self.overrides:
            q = set_period(s)
            if q is None or isinstance(rule, IndexValue):
                return None
            p = lcm(p, q)
            if isinstance(rule, ParityValue):
                p = lcm(p, 2)
        return p

    def eventual_constant(self):
        if all(finite_members(s) is not None for s, _ in self.overrides):
            return self.base.eventual_constant()
        return None

    def children(self):
        return (self.base,)

    def schedules(self):
        out = self.base.schedules()
        for s, _ in self.overrides:
            for sc in _set_schedules(s):
                if sc not in out:
                    out.append(sc)
        return out


def _set_schedules(s: IndexSet) -> list:
    sched = getattr(s, "schedule", None)
    if sched is not None:
        return [sched]
    out = []
    for attr in ("inner", "left", "right"):
        child = getattr(s, attr, None)
        if child is not None:
            out.extend(x for x in _set_schedules(child) if x not in out)
    return out


@dataclass(frozen=True)
class Explicit(SequenceSpec):
    """``head`` replaces the first terms; ``tail`` supplies the rest at the same indices."""

    head: tuple
    tail: SequenceSpec

    def __post_init__(self):
        object.__setattr__(self, "head", _as_floats(self.head))

    def term(self, k):
        if k <= len(self.head):
            return self.head[k - 1]
        return self.tail.term(k)

    def values_at(self, ks):
        ks = np.asarray(ks, dtype=np.int64)
        out = self.tail.values_at(ks).astype(np.float64, copy=True)
        h = len(self.head)
        sel = ks <= h
        if sel.any():
            out[sel] = np.asarray(self.head)[ks[sel] - 1]
        return out

    def bound(self):
        b = self.tail.bound()
        if b is None:
            return None
        return max([b] + [abs(v) for v in self.head])

    def value_set(self):
        vals = self.tail.value_set()
        return None if vals is None else vals | frozenset(self.head)

    def eventual_constant(self):
        return self.tail.eventual_constant()

    def children(self):
        return (self.tail,)


@dataclass(frozen=True)
class Shifted(SequenceSpec):
    """``(x_{k + by})_k``; ``by = 1`` is the drop-first shift."""

    base: SequenceSpec
    by: int = 1

    def __post_init__(self):
        if self.by < 0:
            raise ValueError("shift must be >= 0")

    def term(self, k):
        return self.base.term(k + self.by)

    def values_at(self, ks):
        return self.base.values_at(np.asarray(ks, dtype=np.int64) + self.by)

    def bound(self):
        return self.base.bound()

    def value_set(self):
        return self.base.value_set()

    def period(self):
        return self.base.period()

    def eventual_constant(self):
        return self.base.eventual_constant()

    def children(self):
        return (self.base,)


@dataclass(frozen=True)
class Telescoped(SequenceSpec):
    """``(x_k - x_{k+1})_k``."""

    base: SequenceSpec

    def term(self, k):
        return self.base.term(k) - self.base.term(k + 1)

    def values_at(self, ks):
        ks = np.asarray(ks, dtype=np.int64)
        return self.base.values_at(ks) - self.base.values_at(ks + 1)

    def bound(self):
        b = self.base.bound()
        return None if b is None else 2 * b

    def value_set(self):
        vals = self.base.value_set()
        if vals is None:
            return None
        return frozenset(a - b for a in vals for b in vals)

    def period(self):
        return self.base.period()

    def eventual_constant(self):
        return 0.0 if self.base.eventual_constant() is not None else None

    def children(self):
        return (self.base,)


@dataclass(frozen=True)
class Affine(SequenceSpec):
    """``scale * x_k + offset``."""

    base: SequenceSpec
    scale: float = 1.0
    offset: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "scale", float(self.scale))
        object.__setattr__(self, "offset", float(self.offset))

    def term(self, k):
        return self.scale * self.base.term(k) + self.offset

    def values_at(self, ks):
        return self.scale * self.base.values_at(ks) + self.offset

    def bound(self):
        b = self.base.bound()
        return None if b is None else abs(self.scale) * b + abs(self.offset)

    def value_set(self):
        vals = self.base.value_set()
        return None if vals is None else frozenset(self.scale * v + self.offset for v in vals)

    def period(self):
        return self.base.period()

    def eventual_constant(self):
        c = self.base.eventual_constant()
        return None if c is None else self.scale * c + self.offset

    def children(self):
        return (self.base,)


@dataclass(frozen=True)
class Sum(SequenceSpec):
    left: SequenceSpec
    right: SequenceSpec

    def term(self, k):
        return self.left.term(k) + self.right.term(k)

    def values_at(self, ks):
        return self.left.values_at(ks) + self.right.values_at(ks)

    def bound(self):
        a, b = self.left.bound(), self.right.bound()
        return None if a is None or b is None else a + b

    def value_set(self):
        a, b = self.left.value_set(), self.right.value_set()
        if a is None or b is None or len(a) * len(b) > 4096:
            return None
        return frozenset(x + y for x in a for y in b)

    def period(self):
        a, b = self.left.period(), self.right.period()
        return None if a is None or b is None else a * b // gcd(a, b)

    def eventual_constant(self):
        a, b = self.left.eventual_constant(), self.right.eventual_constant()
        return None if a is None or b is None else a + b

    def children(self):
        return (self.left, self.right)


def term(spec: SequenceSpec, k: int) -> float:
    if k < 1:
        raise ValueError("indices start at 1")
    return spec.term(k)
