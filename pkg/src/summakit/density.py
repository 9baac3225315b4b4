"""Natural density of index sets: exact values where the structure forces the
limit, and empirical trajectories ``prefix_count(n) / n`` otherwise."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, sqrt

import numpy as np

from .errors import CountUnavailable
from .seqspec.schedule import lcm
from .seqspec.sets import (
    ArithmeticProgression, BlockUnion, Complement, Finite, IndexSet, Intersection,
    PerfectSquares, Residues, Union, intersect, normalize, prefers_enumeration, prefix_count,
)

# streaming fallback cap for sets without a closed-form count
STREAM_BUDGET = 10 ** 8


@dataclass(frozen=True)
class DensityEstimate:
    exact: Fraction | None
    trajectory: tuple  # ((n, prefix_count(n) / n), ...)
    counts: tuple
    residual: float
    n_max: int

    @property
    def last(self) -> float:
        return self.trajectory[-1][1]

    @property
    def tolerance(self) -> float:
        return residual_threshold(self.n_max)

    @property
    def converged(self) -> bool:
        """Tail oscillation is within the empirical-convergence threshold."""
        return self.residual <= self.tolerance

    @property
    def consistent(self) -> bool:
        """The last trajectory value agrees with the exact density, when known."""
        return self.exact is None or abs(self.last - float(self.exact)) <= self.tolerance


def residual_threshold(n_max: int) -> float:
    return 10.0 / sqrt(n_max)


def geometric_grid(n_max: int, grid: float = 2.0, extra=()) -> list:
    """Points ``ceil(grid**j) <= n_max``, plus ``extra`` and ``n_max`` itself, sorted."""
    if grid <= 1:
        raise ValueError("grid factor must exceed 1")
    pts = set()
    j = 0
    while True:
        n = ceil(grid ** j)
        if n > n_max:
            break
        pts.add(n)
        j += 1
    pts.update(int(p) for p in extra if 1 <= p <= n_max)
    pts.add(int(n_max))
    return sorted(pts)


def structure_points(obj, n_max: int) -> list:
    """Run ends and midpoints of every block schedule inside ``obj``."""
    pts = []
    for sched in _schedules(obj):
        pts.extend(sched.phase_boundaries_upto(n_max))
    return sorted(set(pts))


def _schedules(obj) -> list:
    if hasattr(obj, "schedules"):
        return obj.schedules()
    out = []
    sched = getattr(obj, "schedule", None)
    if sched is not None:
        out.append(sched)
    for attr in ("inner", "left", "right"):
        child = getattr(obj, attr, None)
        if child is not None:
            out.extend(s for s in _schedules(child) if s not in out)
    return out


def counts_at(s: IndexSet, points) -> list:
    """Exact prefix counts at sorted ``points``; streams membership when no closed form exists."""
    s = normalize(s)
    if not prefers_enumeration(s, points[-1]):
        try:
            return [prefix_count(s, n) for n in points]
        except CountUnavailable:
            if points[-1] > STREAM_BUDGET:
                raise
    out = []
    total = 0
    lo = 1
    for n in points:
        while lo <= n:
            hi = min(n, lo + (1 << 20) - 1)
            ks = np.arange(lo, hi + 1, dtype=np.int64)
            total += int(s.contains_array(ks).sum())
            lo = hi + 1
        out.append(total)
    return out


def empirical_density(s: IndexSet, n_max: int, grid: float = 2.0, extra=()) -> DensityEstimate:
    if n_max < 10:
        raise ValueError("n_max must be at least 10")
    points = geometric_grid(n_max, grid, extra)
    counts = counts_at(s, points)
    traj = tuple((n, c / n) for n, c in zip(points, counts))
    tail = [v for _, v in traj[len(traj) - max(1, len(traj) // 4):]]
    return DensityEstimate(
        exact=exact_density(s),
        trajectory=traj,
        counts=tuple(counts),
        residual=max(tail) - min(tail),
        n_max=int(n_max),
    )


def exact_density(s: IndexSet) -> Fraction | None:
    """The natural density when the set's structure forces the limit, else ``None``."""
    return _exact(normalize(s))


def _exact(s: IndexSet) -> Fraction | None:
    if isinstance(s, Residues):
        return Fraction(len(s.residues), s.modulus)
    if isinstance(s, ArithmeticProgression):
        return Fraction(1, s.step)
    if isinstance(s, (PerfectSquares, Finite)):
        return Fraction(0)
    if isinstance(s, BlockUnion):
        return _block_density(s)
    if isinstance(s, Complement):
        d = _exact(s.inner)
        return None if d is None else 1 - d
    if isinstance(s, Union):
        a, b = _exact(s.left), _exact(s.right)
        if a == 0 and b == 0:
            return Fraction(0)
        if a == 1 or b == 1:
            return Fraction(1)
        if a is None or b is None:
            return None
        both = _exact(normalize(intersect(s.left, s.right)))
        return None if both is None else a + b - both
    if isinstance(s, Intersection):
        a, b = _exact(s.left), _exact(s.right)
        if a == 0 or b == 0:
            return Fraction(0)
        if a == 1:
            return b
        if b == 1:
            return a
        return None
    return None


def _block_density(s: BlockUnion) -> Fraction | None:
    sched = s.schedule
    phase = sched.phases[s.phase]
    top = sched.growth
    if phase.length.growth < top:
        # dominated phase: members through block i are O(g^i), b_i grows like top^i
        return Fraction(0)
    dominant = [ph for ph in sched.phases if ph.length.growth == top]
    p = len(phase.pattern)
    m = s.effective_mask.modulus
    period = lcm(p, m)
    offsets = s.offsets if s.offsets is not None else frozenset(range(p))
    # share of a run kept by offsets and mask, for every alignment of the run start
    shares = set()
    for start in range(period):
        kept = sum(1 for t in range(period)
                   if t % p in offsets and s.effective_mask.contains(start - s.shift + t))
        shares.add(Fraction(kept, period))
    if shares == {0}:
        return Fraction(0)
    if len(dominant) > 1 or len(shares) > 1:
        return None
    return shares.pop()
