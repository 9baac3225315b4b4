"""Structure-preserving transforms of sequence specs.

Each transform pushes itself into the spec tree when the result stays in a
symbolic kind, and otherwise wraps the spec in the matching derived kind
(``Shifted``, ``Telescoped``, ``Affine``, ``Sum``).
"""

from __future__ import annotations

from .schedule import BlockSchedule, Phase, PhaseLength, lcm
from .sets import shift_set
from .spec import (
    Affine, Blocks, Constant, ConstantValue, Explicit, IndexValue, Overlay,
    ParityValue, Periodic, SequenceSpec, Shifted, Sum, Telescoped,
)


def shift(spec: SequenceSpec, t: int = 1) -> SequenceSpec:
    """Drop the first ``t`` terms."""
    if t == 0:
        return spec
    if isinstance(spec, Constant):
        return spec
    if isinstance(spec, Periodic):
        p = len(spec.values)
        r = t % p
        return Periodic(spec.values[r:] + spec.values[:r])
    if isinstance(spec, Overlay):
        if any(isinstance(rule, IndexValue) for _, rule in spec.overrides):
            return Shifted(spec, t)
        overrides = []
        for s, rule in spec.overrides:
            if isinstance(rule, ParityValue) and t % 2:
                rule = ParityValue(rule.value_if_even, rule.value_if_odd)
            overrides.append((shift_set(s, t), rule))
        return Overlay(shift(spec.base, t), tuple(overrides))
    if isinstance(spec, Explicit):
        return Explicit(spec.head[t:], shift(spec.tail, t))
    if isinstance(spec, Affine):
        return Affine(shift(spec.base, t), spec.scale, spec.offset)
    if isinstance(spec, Sum):
        return Sum(shift(spec.left, t), shift(spec.right, t))
    if isinstance(spec, Telescoped):
        return Telescoped(shift(spec.base, t))
    if isinstance(spec, Shifted):
        return Shifted(spec.base, spec.by + t)
    return Shifted(spec, t)


def _divides_all_lengths(p: int, length: PhaseLength) -> bool:
    # base**i mod p is eventually periodic with period and preperiod below p
    return all(length(i) % p == 0 for i in range(1, 2 * p + 8))


def _telescope_schedule(sched: BlockSchedule) -> BlockSchedule | None:
    phases = sched.phases
    if any(ph.length(1) < 1 for ph in phases):
        return None
    if not all(_divides_all_lengths(len(ph.pattern), ph.length) for ph in phases):
        return None
    out = []
    for j, ph in enumerate(phases):
        pat = ph.pattern
        p = len(pat)
        diffs = tuple(pat[r] - pat[(r + 1) % p] for r in range(p))
        nxt = phases[(j + 1) % len(phases)].pattern[0]
        inner = PhaseLength(ph.length.coef, ph.length.base, ph.length.const - 1)
        out.append(Phase(diffs, inner))
        out.append(Phase((pat[-1] - nxt,), PhaseLength.fixed(1)))
    return BlockSchedule(tuple(out))


def telescope(spec: SequenceSpec) -> SequenceSpec:
    """Spec of ``(x_k - x_{k+1})_k``."""
    if isinstance(spec, Constant):
        return Constant(0.0)
    if isinstance(spec, Periodic):
        v = spec.values
        return Periodic(tuple(v[i] - v[(i + 1) % len(v)] for i in range(len(v))))
    if isinstance(spec, Blocks):
        sched = _telescope_schedule(spec.schedule)
        return Telescoped(spec) if sched is None else Blocks(sched)
    if isinstance(spec, Explicit):
        h = len(spec.head)
        if h == 0:
            return telescope(spec.tail)
        nxt = spec.head[1:] + (spec.tail.term(h + 1),)
        return Explicit(tuple(a - b for a, b in zip(spec.head, nxt)), telescope(spec.tail))
    if isinstance(spec, Affine):
        return Affine(telescope(spec.base), spec.scale, 0.0)
    if isinstance(spec, Shifted):
        return shift(telescope(spec.base), spec.by)
    if isinstance(spec, Sum):
        return Sum(telescope(spec.left), telescope(spec.right))
    return Telescoped(spec)


def _map_rule(rule, a: float, b: float):
    if isinstance(rule, ConstantValue):
        return ConstantValue(a * rule.value + b)
    if isinstance(rule, ParityValue):
        return ParityValue(a * rule.value_if_odd + b, a * rule.value_if_even + b)
    return None


def affine(spec: SequenceSpec, scale: float = 1.0, offset: float = 0.0) -> SequenceSpec:
    """Spec of ``scale * x_k + offset``."""
    if scale == 1 and offset == 0:
        return spec
    if scale == 0:
        return Constant(offset)
    if isinstance(spec, Constant):
        return Constant(scale * spec.value + offset)
    if isinstance(spec, Periodic):
        return Periodic(tuple(scale * v + offset for v in spec.values))
    if isinstance(spec, Blocks):
        phases = tuple(Phase(tuple(scale * v + offset for v in ph.pattern), ph.length)
                       for ph in spec.schedule.phases)
        return Blocks(BlockSchedule(phases))
    if isinstance(spec, Overlay):
        rules = [_map_rule(r, scale, offset) for _, r in spec.overrides]
        if all(r is not None for r in rules):
            return Overlay(affine(spec.base, scale, offset),
                           tuple((s, r) for (s, _), r in zip(spec.overrides, rules)))
    if isinstance(spec, Explicit):
        return Explicit(tuple(scale * v + offset for v in spec.head), affine(spec.tail, scale, offset))
    if isinstance(spec, Affine):
        return affine(spec.base, scale * spec.scale, scale * spec.offset + offset)
    return Affine(spec, scale, offset)


def add(x: SequenceSpec, y: SequenceSpec) -> SequenceSpec:
    """Spec of the termwise sum."""
    if isinstance(x, Constant):
        return affine(y, 1.0, x.value)
    if isinstance(y, Constant):
        return affine(x, 1.0, y.value)
    if isinstance(x, Periodic) and isinstance(y, Periodic):
        p = lcm(len(x.values), len(y.values))
        return Periodic(tuple(x.term(k) + y.term(k) for k in range(1, p + 1)))
    return Sum(x, y)
