"""Statistical convergence: exceedance sets, limit search, and the density-one
subsequence along which a statistically convergent sequence converges."""

from __future__ import annotations

from functools import singledispatch
from math import ceil, floor, sqrt

import numpy as np

from .density import exact_density, geometric_grid, structure_points, counts_at
from .errors import CountUnavailable, SymbolicUnavailable, WitnessUnavailable
from .seqspec.sets import (
    ALL, EMPTY, EVENS, ODDS, ArithmeticProgression, BlockUnion, Finite, IndexSet,
    Residues, complement_of, finite_members, initial_segment, intersect, is_empty,
    prefix_count, shift_set, union_of,
)
from .seqspec.spec import (
    Affine, Blocks, Constant, ConstantValue, Explicit, IndexValue, Overlay,
    ParityValue, Periodic, SequenceSpec, Shifted,
)
from .seqspec.transform import affine, telescope
from .verdict import ConvergenceVerdict, converges, inconclusive, refuted

DEFAULT_EPS = (0.5, 0.25, 0.1, 0.01, 0.001)
DEFAULT_N_MAX = 10 ** 6
# exceedance density that counts as "bounded below" along the tail
REFUTE_FLOOR = 0.05
# share of sampled terms a value needs to become a limit candidate
FREQUENT = 0.4
SAMPLE_SIZE = 1 << 16


def _far(v: float, ell: float, eps: float) -> bool:
    return abs(v - ell) > eps


# -- exceedance sets ----------------------------------------------------------

def exceedance_set(spec: SequenceSpec, ell: float, eps: float) -> IndexSet:
    """The index set ``{k : |x_k - ell| > eps}`` in the set algebra.

    Raises ``SymbolicUnavailable`` for kinds whose terms mix positions
    (telescoped and summed specs); callers then stream the terms instead.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    return _exceed(spec, float(ell), float(eps))


@singledispatch
def _exceed(spec, ell, eps):
    raise SymbolicUnavailable("no symbolic exceedance set for %s" % type(spec).__name__)


@_exceed.register
def _(spec: Constant, ell, eps):
    return ALL if _far(spec.value, ell, eps) else EMPTY


@_exceed.register
def _(spec: Periodic, ell, eps):
    p = len(spec.values)
    res = frozenset((r + 1) % p for r, v in enumerate(spec.values) if _far(v, ell, eps))
    if not res:
        return EMPTY
    if len(res) == p:
        return ALL
    return Residues(p, res)


@_exceed.register
def _(spec: Blocks, ell, eps):
    parts = []
    for j, ph in enumerate(spec.schedule.phases):
        offs = frozenset(r for r, v in enumerate(ph.pattern) if _far(v, ell, eps))
        if not offs:
            continue
        if len(offs) == len(ph.pattern):
            offs = None
        parts.append(BlockUnion(spec.schedule, j, offs))
    return union_of(*parts)


def _rule_exceed(rule, ell, eps) -> IndexSet:
    if isinstance(rule, ConstantValue):
        return ALL if _far(rule.value, ell, eps) else EMPTY
    if isinstance(rule, ParityValue):
        odd, even = _far(rule.value_if_odd, ell, eps), _far(rule.value_if_even, ell, eps)
        if odd and even:
            return ALL
        return ODDS if odd else EVENS if even else EMPTY
    if isinstance(rule, IndexValue):
        lo, hi = max(1, ceil(ell - eps)), floor(ell + eps)
        inside = [k for k in range(lo, hi + 1) if not _far(k, ell, eps)]
        return complement_of(Finite(tuple(inside)))
    raise SymbolicUnavailable("unknown override rule %r" % (rule,))


@_exceed.register
def _(spec: Overlay, ell, eps):
    sets = [s for s, _ in spec.overrides]
    parts = [intersect(_exceed(spec.base, ell, eps), complement_of(union_of(*sets)))]
    for j, (s, rule) in enumerate(spec.overrides):
        # later overrides win, so each region excludes everything after it
        region = intersect(s, complement_of(union_of(*sets[j + 1:])))
        parts.append(intersect(region, _rule_exceed(rule, ell, eps)))
    return union_of(*parts)


@_exceed.register
def _(spec: Explicit, ell, eps):
    h = len(spec.head)
    head = Finite(tuple(k for k in range(1, h + 1) if _far(spec.head[k - 1], ell, eps)))
    tail = intersect(_exceed(spec.tail, ell, eps), complement_of(initial_segment(h)))
    return union_of(head, tail)


@_exceed.register
def _(spec: Shifted, ell, eps):
    return shift_set(_exceed(spec.base, ell, eps), spec.by)


@_exceed.register
def _(spec: Affine, ell, eps):
    if spec.scale == 0:
        return ALL if _far(spec.offset, ell, eps) else EMPTY
    a = abs(spec.scale)
    return _exceed(spec.base, (ell - spec.offset) / spec.scale, eps / a)


# -- counting -----------------------------------------------------------------

def _stream_counts(spec: SequenceSpec, pairs, points) -> dict:
    """Exceedance counts at ``points`` for every ``(ell, eps)`` in one pass over the terms."""
    totals = {pair: 0 for pair in pairs}
    out = {pair: [] for pair in pairs}
    lo = 1
    for n in points:
        while lo <= n:
            hi = min(n, lo + (1 << 20) - 1)
            xs = spec.terms(lo, hi + 1)
            for ell, eps in pairs:
                totals[(ell, eps)] += int(np.count_nonzero(np.abs(xs - ell) > eps))
            lo = hi + 1
        for pair in pairs:
            out[pair].append(totals[pair])
    return out


class _Counter:
    """Exceedance trajectories for one spec, symbolic when possible."""

    def __init__(self, spec: SequenceSpec, points):
        self.spec = spec
        self.points = list(points)
        self.symbolic = True

    def trajectories(self, pairs) -> dict:
        out, pending = {}, []
        for ell, eps in pairs:
            counts = None
            if self.symbolic:
                try:
                    counts = counts_at(exceedance_set(self.spec, ell, eps), self.points)
                except (SymbolicUnavailable, CountUnavailable):
                    self.symbolic = False
            if counts is None:
                pending.append((ell, eps))
            else:
                out[(ell, eps)] = counts
        if pending:
            out.update(_stream_counts(self.spec, pending, self.points))
        return {pair: [c / n for n, c in zip(self.points, cs)] for pair, cs in out.items()}


def default_n_max(spec: SequenceSpec) -> int:
    """``10**6``, or the first block boundary at or past it for block-structured specs."""
    n = DEFAULT_N_MAX
    for sched in spec.schedules():
        if sched.periodic:
            continue
        i = 1
        while sched.boundary(i) < DEFAULT_N_MAX:
            i += 1
        n = max(n, sched.boundary(i))
    return n


def _epochs(spec: SequenceSpec, points) -> list:
    """Epoch label per grid point: the block index for block-structured specs, else the point."""
    scheds = [s for s in spec.schedules() if not s.periodic]
    if not scheds:
        return list(range(len(points)))
    sched = scheds[0]
    return [sched.block_of(n) for n in points]


def _tail_ok(values, epochs) -> bool:
    """Per-epoch maxima over the last three epochs never increase."""
    peaks = {}
    for v, e in zip(values, epochs):
        peaks[e] = max(peaks.get(e, 0.0), v)
    last = [peaks[e] for e in sorted(peaks)][-3:]
    return all(b <= a + 1e-12 for a, b in zip(last, last[1:]))


def _candidates(spec: SequenceSpec, n_max: int) -> list:
    head = spec.terms(1, min(n_max, SAMPLE_SIZE) + 1)
    spread = spec.values_at(np.unique(np.linspace(1, n_max, 4096).astype(np.int64)))
    sample = np.concatenate([head, spread])
    out = [float(np.median(sample))]
    vals, freq = np.unique(sample, return_counts=True)
    order = np.argsort(-freq, kind="stable")
    out.extend(float(vals[i]) for i in order if freq[i] >= FREQUENT * len(sample))
    known = spec.value_set()
    if known is not None and len(known) <= 64:
        share = {float(v): int(f) for v, f in zip(vals, freq)}
        out.extend(sorted(known, key=lambda v: (-share.get(v, 0), v)))
    seen = []
    for c in out:
        if c not in seen:
            seen.append(c)
    return seen


def _critical_levels(values, eps) -> list:
    """Every limit candidate whose exceedance set can differ, up to the band's open ends."""
    vs = sorted(values)
    pts = set()
    for v in vs:
        pts.update((v - eps, v, v + eps))
    pts.update((vs[0] - 2 * eps, vs[-1] + 2 * eps))
    ordered = sorted(pts)
    pts.update((a + b) / 2 for a, b in zip(ordered, ordered[1:]))
    return sorted(pts)


def _traj_json(points, values) -> list:
    return [[int(n), float(v)] for n, v in zip(points, values)]


def stat_limit(spec: SequenceSpec, n_max: int | None = None, eps_grid=DEFAULT_EPS,
               candidate: float | None = None, grid: float = 2.0) -> ConvergenceVerdict:
    """Test statistical convergence on the prefix ``1..n_max``.

    Converges(ell) needs every exceedance trajectory to end at or below
    ``max(10/sqrt(n_max), 1e-4)`` with a nonincreasing tail. Refuted needs an
    ``eps`` whose exceedance density stays at or above ``REFUTE_FLOOR`` across
    the tail for every candidate level the value set allows.
    """
    eps_grid = sorted((float(e) for e in eps_grid), reverse=True)
    if not eps_grid or min(eps_grid) <= 0:
        raise ValueError("eps_grid must be nonempty and strictly positive")
    n_max = int(n_max or default_n_max(spec))
    if n_max < 10:
        raise ValueError("n_max must be at least 10")
    points = geometric_grid(n_max, grid, structure_points(spec, n_max))
    epochs = _epochs(spec, points)
    threshold = max(10.0 / sqrt(n_max), 1e-4)
    counter = _Counter(spec, points)
    tried = []
    base = {"n_max": n_max, "threshold": threshold, "eps_grid": eps_grid}

    cands = [float(candidate)] if candidate is not None else _candidates(spec, n_max)
    for ell in cands:
        trajs = {}
        ok = True
        for eps in eps_grid:
            values = counter.trajectories([(ell, eps)])[(ell, eps)]
            trajs[eps] = values
            if values[-1] > threshold or not _tail_ok(values, epochs):
                ok = False
                break
        tried.append(ell)
        if ok:
            return converges(
                ell, **base, candidates=tried,
                mode="symbolic" if counter.symbolic else "streaming",
                residuals={"eps=%r" % e: max(v[-3:]) - min(v[-3:]) for e, v in trajs.items()},
                trajectories={"eps=%r" % e: _traj_json(points, v) for e, v in trajs.items()},
            )

    values = spec.value_set()
    if candidate is None and values is not None and len(values) <= 64:
        tail = max(3, len(points) // 4)
        for eps in eps_grid:
            levels = _critical_levels(values, eps)
            trajs = counter.trajectories([(ell, eps) for ell in levels])
            floor_ = min(min(v[-tail:]) for v in trajs.values())
            if floor_ >= REFUTE_FLOOR:
                worst = min(levels, key=lambda ell: min(trajs[(ell, eps)][-tail:]))
                return refuted(
                    **base, candidates=tried, witness_eps=eps, lower_bound=floor_,
                    mode="symbolic" if counter.symbolic else "streaming",
                    worst_level=worst,
                    trajectories={"ell=%r eps=%r" % (worst, eps): _traj_json(points, trajs[(worst, eps)])},
                )
    return inconclusive(**base, candidates=tried,
                        mode="symbolic" if counter.symbolic else "streaming")


# -- constructions from statistical limits ------------------------------------

def density_one_subsequence(spec: SequenceSpec, ell: float, eps_schedule=DEFAULT_EPS,
                            n_max: int | None = None) -> IndexSet:
    """An index set ``J`` of density one along which ``x_k -> ell`` in the usual sense.

    ``J`` is the complement of the union of exceedance sets ``E_j`` for a
    decreasing ``eps`` schedule, each ``E_j`` cut to indices from a threshold
    ``t_j`` on. When ``E_j`` has exact density zero, ``t_j = 1``; otherwise
    ``t_j`` is the first grid point after which the empirical density of
    ``E_j`` stays below ``2**-(j+1)``.
    """
    eps_schedule = sorted((float(e) for e in eps_schedule), reverse=True)
    n_max = int(n_max or default_n_max(spec))
    parts = []
    for j, eps in enumerate(eps_schedule):
        try:
            e = exceedance_set(spec, ell, eps)
        except SymbolicUnavailable as exc:
            raise WitnessUnavailable(str(exc)) from exc
        if is_empty(e) or e in parts:
            continue
        d = exact_density(e)
        if d is not None and d > 0:
            raise WitnessUnavailable("exceedance set at eps=%g has density %s" % (eps, d))
        start = 1
        if d is None:
            start = _thinning_start(e, n_max, 2.0 ** -(j + 1))
        parts.append(e if start == 1 else intersect(e, ArithmeticProgression(start, 1)))
    return complement_of(union_of(*parts))


def _thinning_start(e: IndexSet, n_max: int, level: float) -> int:
    points = geometric_grid(n_max)
    try:
        counts = counts_at(e, points)
    except CountUnavailable as exc:
        raise WitnessUnavailable(str(exc)) from exc
    start = None
    for n, c in zip(points, counts):
        if c / n <= level:
            start = n if start is None else start
        else:
            start = None
    if start is None:
        raise WitnessUnavailable("exceedance density does not settle below %g" % level)
    return start


def recenter(spec: SequenceSpec, ell: float) -> SequenceSpec:
    """Termwise ``x_k - ell``; statistical limit ``ell`` becomes 0."""
    if ell == 0:
        return spec
    return affine(spec, 1.0, -float(ell))


def usual_limit(spec: SequenceSpec, statistical: ConvergenceVerdict | None = None,
                almost: ConvergenceVerdict | None = None,
                n_max: int | None = None) -> ConvergenceVerdict:
    """Ordinary convergence, decided from structure where possible.

    Usual convergence implies both statistical and almost convergence, so a
    refutation of either refutes it too.
    """
    c = spec.eventual_constant()
    if c is not None:
        return converges(c, reason="eventually constant")
    if spec.bound() is None:
        return refuted(reason="unbounded")
    for name, v in (("statistical", statistical), ("almost", almost)):
        if v is not None and v.refuted:
            return refuted(reason="not %s convergent" % name)
    if statistical is None:
        statistical = stat_limit(spec, n_max)
    if statistical.refuted:
        return refuted(reason="not statistical convergent")
    if not statistical.converges:
        return inconclusive(reason="statistical test inconclusive")
    ell = statistical.limit
    n = statistical.diagnostics.get("n_max", n_max or default_n_max(spec))
    values = spec.value_set()
    if values is not None and len(values) > 1:
        gaps = [abs(v - ell) for v in values if v != ell]
        eps = min(gaps) / 2
        try:
            e = exceedance_set(spec, ell, eps)
        except SymbolicUnavailable:
            return inconclusive(reason="no symbolic exceedance set")
        if finite_members(e) is not None:
            return converges(ell, reason="finitely many exceedances")
        try:
            late = prefix_count(e, n) - prefix_count(e, n // 2)
        except CountUnavailable:
            return inconclusive(reason="exceedance count unavailable")
        if late > 0:
            return refuted(reason="exceedances persist", eps=eps, late_exceedances=late,
                           window=[n // 2 + 1, n])
    return inconclusive(reason="no structural decision")


__all__ = [
    "DEFAULT_EPS", "default_n_max", "density_one_subsequence", "exceedance_set",
    "recenter", "stat_limit", "telescope", "usual_limit",
]
