"""Seeded random fixtures for property testing.

Every generator takes a ``random.Random`` and returns structured objects whose
relevant facts (density zero, statistical limit) hold by construction.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .gasconv import Modification
from .seqspec.schedule import BlockSchedule, Phase, PhaseLength
from .seqspec.sets import (
    ArithmeticProgression, BlockUnion, Finite, IndexSet, Mask, PerfectSquares, Residues,
    complement_of, intersect, shift_set, union_of,
)
from .seqspec.spec import (
    Blocks, Constant, ConstantValue, Explicit, Overlay, ParityValue, Periodic,
)

# (dominant growth, dominated growth) pairs for generated block schedules
_GROWTHS = ((4, 2), (9, 3), (16, 4), (100, 10))
_VALUES = (-2, -1, -0.5, 0, 0.5, 1, 2, 3, 5)


def _value(rng: random.Random) -> float:
    return float(rng.choice(_VALUES))


def random_schedule(rng: random.Random, dominant=(0.0,), dominated=(1.0,)) -> BlockSchedule:
    """Two phases per block; the first grows strictly faster than the second."""
    big, small = rng.choice(_GROWTHS)
    return BlockSchedule((
        Phase(tuple(dominant), PhaseLength(len(dominant), big, 0)),
        Phase(tuple(dominated), PhaseLength(1, small, 0)),
    ))


def random_zero_density_set(rng: random.Random, depth: int = 2) -> IndexSet:
    kind = rng.randrange(6 if depth > 0 else 4)
    if kind == 0:
        return PerfectSquares(rng.randrange(4))
    if kind == 1:
        return Finite(tuple(sorted(rng.sample(range(1, 200), rng.randrange(1, 8)))))
    if kind == 2:
        return BlockUnion(random_schedule(rng), 1, None, None, 0)
    if kind == 3:
        return shift_set(PerfectSquares(), rng.randrange(1, 5))
    if kind == 4:
        return union_of(random_zero_density_set(rng, depth - 1), random_zero_density_set(rng, depth - 1))
    # a density-zero set intersected with anything stays density zero
    return intersect(random_zero_density_set(rng, depth - 1), random_index_set(rng, depth - 1))


def random_index_set(rng: random.Random, depth: int = 2) -> IndexSet:
    kind = rng.randrange(8 if depth > 0 else 5)
    if kind == 0:
        step = rng.randrange(1, 7)
        return ArithmeticProgression(rng.randrange(1, step + 1), step)
    if kind == 1:
        m = rng.randrange(2, 9)
        return Residues(m, frozenset(rng.sample(range(m), rng.randrange(1, m + 1))))
    if kind == 2:
        return PerfectSquares()
    if kind == 3:
        return Finite(tuple(sorted(rng.sample(range(1, 100), rng.randrange(0, 6)))))
    if kind == 4:
        sched = random_schedule(rng)
        mask = Mask(2, frozenset({rng.randrange(2)})) if rng.random() < 0.5 else None
        return BlockUnion(sched, rng.randrange(2), None, mask, 0)
    if kind == 5:
        return complement_of(random_index_set(rng, depth - 1))
    if kind == 6:
        return union_of(random_index_set(rng, depth - 1), random_index_set(rng, depth - 1))
    return intersect(random_index_set(rng, depth - 1), random_index_set(rng, depth - 1))


def random_disjoint_density_pair(rng: random.Random) -> tuple:
    """Two residue sets with exact densities; overlapping or not, at random."""
    m = rng.choice((2, 3, 4, 6, 12))
    a = frozenset(rng.sample(range(m), rng.randrange(1, m + 1)))
    b = frozenset(rng.sample(range(m), rng.randrange(1, m + 1)))
    if rng.random() < 0.3:
        return Residues(m, a), random_zero_density_set(rng)
    return Residues(m, a), Residues(m, b)


def random_rule(rng: random.Random):
    if rng.random() < 0.6:
        return ConstantValue(_value(rng))
    return ParityValue(_value(rng), _value(rng))


def random_modification(rng: random.Random) -> Modification:
    return Modification(random_zero_density_set(rng), random_rule(rng))


def random_stat_convergent(rng: random.Random) -> tuple:
    """``(spec, limit)`` for a bounded spec that converges statistically to ``limit``."""
    ell = _value(rng)
    kind = rng.randrange(4)
    if kind == 0:
        overrides = tuple((random_zero_density_set(rng), random_rule(rng))
                          for _ in range(rng.randrange(1, 3)))
        return Overlay(Constant(ell), overrides), ell
    if kind == 1:
        other = tuple(_value(rng) for _ in range(rng.randrange(1, 3)))
        return Blocks(random_schedule(rng, (ell,), other)), ell
    if kind == 2:
        head = tuple(_value(rng) for _ in range(rng.randrange(1, 10)))
        return Explicit(head, Constant(ell)), ell
    return Constant(ell), ell


def random_periodic(rng: random.Random, max_period: int = 12) -> Periodic:
    return Periodic(tuple(_value(rng) for _ in range(rng.randrange(1, max_period + 1))))


def exact_union_bounds(c: Fraction, d: Fraction) -> tuple:
    """Bounds a union's density must satisfy given the densities of its parts."""
    return max(c, d), min(c + d, Fraction(1))


__all__ = [
    "exact_union_bounds", "random_disjoint_density_pair", "random_index_set", "random_modification",
    "random_periodic", "random_rule", "random_schedule", "random_stat_convergent",
    "random_zero_density_set",
]
