"""Almost convergence through uniform window means: a bounded sequence is almost
convergent to ``ell`` when ``(x_p + ... + x_{p+k-1}) / k -> ell`` uniformly in ``p``."""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil

import numpy as np

from .errors import UnboundedSpec
from .seqspec.schedule import BlockSchedule
from .seqspec.spec import Blocks, Constant, Periodic, SequenceSpec, Shifted
from .verdict import ConvergenceVerdict, converges, inconclusive, refuted

DEFAULT_K = (10, 100, 1000, 10000)
# windows are scanned from a single prefix-sum array of this many terms
SCAN_BASE = 10 ** 5
# largest start index used by structure-aware probes
PROBE_LIMIT = 10 ** 10


@dataclass(frozen=True)
class WindowStats:
    k: int
    sup_mean: float
    inf_mean: float
    p_range: int
    exact: bool = False

    @property
    def oscillation(self) -> float:
        return self.sup_mean - self.inf_mean

    def as_dict(self) -> dict:
        return {"k": self.k, "sup_mean": self.sup_mean, "inf_mean": self.inf_mean,
                "p_range": self.p_range, "exact": self.exact}


def default_p_budget(k: int) -> int:
    return max(SCAN_BASE, 100 * k)


def window_mean(spec: SequenceSpec, p: int, k: int) -> float:
    """Mean of ``x_p, ..., x_{p+k-1}``."""
    if p < 1 or k < 1:
        raise ValueError("p and k must be positive")
    if isinstance(spec, Periodic):
        v = np.asarray(spec.values)
        q, r = divmod(k, len(v))
        idx = (np.arange(p, p + r) - 1) % len(v)
        return float((q * v.sum() + v[idx].sum()) / k)
    total = 0.0
    for lo in range(p, p + k, 1 << 20):
        hi = min(p + k, lo + (1 << 20))
        total += float(spec.terms(lo, hi).sum())
    return total / k


def exact_periodic_almost_limit(spec: SequenceSpec) -> float | None:
    """The period mean of a periodic spec, which is its almost limit; ``None`` otherwise."""
    if isinstance(spec, Periodic):
        return float(np.mean(spec.values))
    return None


def _periodic_stats(values: np.ndarray, k: int) -> WindowStats:
    p = len(values)
    ext = np.concatenate([[0.0], np.cumsum(np.tile(values, 2 + k // p))])
    starts = np.arange(p)
    sums = ext[starts + k] - ext[starts]
    return WindowStats(k, float(sums.max() / k), float(sums.min() / k), p, exact=True)


def _probe_starts(spec: SequenceSpec, k: int) -> list:
    """Window starts inside and across phase runs of every block schedule in ``spec``."""
    shift = spec.by if isinstance(spec, Shifted) else 0
    out = []
    for sched in spec.schedules():
        if sched.periodic:
            continue
        for _, _, start, end in sched.runs(PROBE_LIMIT):
            for p in (start, start + (end - start + 1 - k) // 2, end - k + 1, end - k // 2):
                p -= shift
                if p >= 1:
                    out.append(p)
    return sorted(set(out))


def _stats(spec, k, p_budget, prefix, probes) -> WindowStats:
    p_max = min(p_budget(k), len(prefix) - k)
    sums = prefix[k:k + p_max] - prefix[:p_max]
    hi, lo = float(sums.max() / k), float(sums.min() / k)
    for p in probes:
        if p <= p_max:
            continue
        m = window_mean(spec, p, k)
        hi, lo = max(hi, m), min(lo, m)
    return WindowStats(k, hi, lo, p_max + len(probes))


def _phase_witness(spec: SequenceSpec, k_max: int) -> dict | None:
    """Two phases with unbounded runs and different means force non-uniform windows."""
    base, shift = spec, 0
    if isinstance(spec, Shifted) and isinstance(spec.base, Blocks):
        base, shift = spec.base, spec.by
    if not isinstance(base, Blocks):
        return None
    sched: BlockSchedule = base.schedule
    growing = [j for j, ph in enumerate(sched.phases) if ph.length.growth > 1]
    for a in growing:
        for b in growing:
            ma, mb = sched.phases[a].mean, sched.phases[b].mean
            if ma <= mb:
                continue
            windows = {}
            for j in (a, b):
                p_len = len(sched.phases[j].pattern)
                k = ceil(k_max / p_len) * p_len
                for _, jj, start, end in sched.runs(PROBE_LIMIT):
                    if jj == j and end - start + 1 >= k and start - shift >= 1:
                        p = start - shift
                        windows[j] = (p, k, window_mean(spec, p, k))
                        break
            if len(windows) < 2:
                continue
            return {
                "phases": [a + 1, b + 1],
                "phase_means": [ma, mb],
                "gap": ma - mb,
                "windows": [list(windows[a]), list(windows[b])],
            }
    return None


def lorentz_test(spec: SequenceSpec, k_schedule=None, p_budget=default_p_budget) -> ConvergenceVerdict:
    """Test almost convergence with window lengths ``k_schedule``.

    Converges when the oscillation ``sup - inf`` of window means at the largest
    ``k`` is within ``max(1e-3, 2M/k)`` and the midpoint stays inside the
    bracket of the previous ``k``. Block specs whose growing phases have
    different means are refuted with two explicit phase-interior windows.
    """
    bound = spec.bound()
    if bound is None:
        raise UnboundedSpec("almost convergence needs a bounded sequence")
    period = spec.period()
    if k_schedule is None:
        k_schedule = DEFAULT_K
        if period:
            k_schedule = tuple(ceil(k / period) * period for k in k_schedule)
    ks = sorted(set(int(k) for k in k_schedule))
    if not ks or ks[0] < 1:
        raise ValueError("k_schedule must hold positive integers")
    k_max = ks[-1]
    tol = max(1e-3, 2 * bound / k_max)
    diag = {"k_schedule": ks, "tolerance": tol, "bound": bound}

    c = spec.eventual_constant()
    if c is not None and not isinstance(spec, (Periodic, Constant)):
        # ordinary convergence implies almost convergence to the same value
        return converges(c, **diag, reason="eventually constant")

    witness = _phase_witness(spec, k_max)
    if witness is not None:
        return refuted(**diag, witness=witness)

    if isinstance(spec, (Periodic, Constant)):
        v = np.asarray(spec.values if isinstance(spec, Periodic) else (spec.value,))
        stats = [_periodic_stats(v, k) for k in ks]
    else:
        n = max(p_budget(k) + k for k in ks) + 1
        prefix = np.zeros(n + 1)
        for start, xs in spec.chunks(n):
            prefix[start:start + len(xs)] = xs
        prefix = np.cumsum(prefix)
        stats = [_stats(spec, k, p_budget, prefix, _probe_starts(spec, k)) for k in ks]
    diag["windows"] = [s.as_dict() for s in stats]

    last = stats[-1]
    mid = (last.sup_mean + last.inf_mean) / 2
    bracketed = all(s.inf_mean - tol <= mid <= s.sup_mean + tol for s in stats[-2:])
    if last.oscillation <= tol and bracketed:
        return converges(mid, **diag)
    return inconclusive(**diag, oscillation=last.oscillation)


__all__ = [
    "DEFAULT_K", "WindowStats", "default_p_budget", "exact_periodic_almost_limit",
    "lorentz_test", "window_mean",
]
