"""Structured subsets of the positive integers with exact prefix counts.

Every set supports scalar and vectorised membership.  ``prefix_count`` reduces
an arbitrary boolean combination to conjunctions of atoms by inclusion-exclusion
and counts those with closed forms:

* residue classes, progressions and block unions are unions of *pieces*
  (an interval carrying a residue mask) and intersect piecewise;
* squares and finite sets are sparse, so their members are enumerated and
  tested against the remaining atoms.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from functools import lru_cache
from math import isqrt

import numpy as np

from ..errors import CountUnavailable
from .schedule import BlockSchedule, lcm

# largest residue-mask modulus we are willing to tabulate
MASK_BUDGET = 1 << 20
# largest number of sparse members enumerated for one count
# prefixes short enough to enumerate when the expression is large
FAST_ENUM = 1 << 22
FAST_ENUM_ATOMS = 6
ENUM_BUDGET = 10 ** 7


@dataclass(frozen=True)
class Mask:
    """Residue classes ``{k : k mod modulus in residues}``."""

    modulus: int
    residues: frozenset
    _sorted: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        res = frozenset(int(r) % self.modulus for r in self.residues)
        object.__setattr__(self, "residues", res)
        object.__setattr__(self, "_sorted", tuple(sorted(r for r in res if r)))

    @property
    def full(self) -> bool:
        return len(self.residues) == self.modulus

    @property
    def empty(self) -> bool:
        return not self.residues

    def upto(self, x: int) -> int:
        """Members of the mask in ``[1, x]``."""
        if x < 1:
            return 0
        q, r = divmod(x, self.modulus)
        return q * len(self.residues) + bisect.bisect_right(self._sorted, r)

    def between(self, lo: int, hi: int) -> int:
        if hi < lo:
            return 0
        return self.upto(hi) - self.upto(lo - 1)

    def contains(self, k: int) -> bool:
        return k % self.modulus in self.residues

    def contains_array(self, ks):
        if self.full:
            return np.ones(len(ks), dtype=bool)
        return np.isin(ks % self.modulus, np.fromiter(self.residues, dtype=np.int64))

    def shifted(self, t: int) -> "Mask":
        """Mask of ``{k : k + t in self}``."""
        return Mask(self.modulus, frozenset((r - t) % self.modulus for r in self.residues))


ALL_MASK = Mask(1, frozenset({0}))


@lru_cache(maxsize=4096)
def combine_masks(a: Mask, b: Mask) -> Mask:
    if a.full:
        return b
    if b.full:
        return a
    m = lcm(a.modulus, b.modulus)
    if m > MASK_BUDGET:
        raise CountUnavailable("combined residue modulus %d exceeds budget" % m)
    r = np.arange(m, dtype=np.int64)
    keep = a.contains_array(r) & b.contains_array(r)
    return Mask(m, frozenset(int(x) for x in r[keep]))


class IndexSet:
    """Base class. Subclasses are immutable, hashable and compare structurally."""

    def contains(self, k: int) -> bool:
        raise NotImplementedError

    def contains_array(self, ks: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __contains__(self, k) -> bool:
        return self.contains(int(k))

    def __or__(self, other):
        return Union(self, other)

    def __and__(self, other):
        return Intersection(self, other)

    def __invert__(self):
        return Complement(self)

    def prefix_count(self, n: int) -> int:
        return prefix_count(self, n)


@dataclass(frozen=True)
class ArithmeticProgression(IndexSet):
    """``{first, first + step, first + 2*step, ...}``."""

    first: int
    step: int

    def __post_init__(self):
        if self.first < 1 or self.step < 1:
            raise ValueError("progression needs first >= 1 and step >= 1")

    def contains(self, k):
        return k >= self.first and (k - self.first) % self.step == 0

    def contains_array(self, ks):
        return (ks >= self.first) & ((ks - self.first) % self.step == 0)

    @property
    def pure(self) -> bool:
        """True when the progression is a whole residue class."""
        return self.first <= self.step


@dataclass(frozen=True)
class Residues(IndexSet):
    """Union of residue classes modulo ``modulus``; ``Residues(1, {0})`` is all of N."""

    modulus: int
    residues: frozenset

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        object.__setattr__(self, "residues", frozenset(int(r) % self.modulus for r in self.residues))

    @property
    def mask(self) -> Mask:
        return Mask(self.modulus, self.residues)

    def contains(self, k):
        return k % self.modulus in self.residues

    def contains_array(self, ks):
        return self.mask.contains_array(ks)


@dataclass(frozen=True)
class PerfectSquares(IndexSet):
    """``{j*j - offset : j*j - offset >= 1}``; ``offset=0`` gives the squares."""

    offset: int = 0

    def contains(self, k):
        x = k + self.offset
        return k >= 1 and isqrt(x) ** 2 == x

    def contains_array(self, ks):
        x = np.asarray(ks, dtype=np.int64) + self.offset
        r = np.floor(np.sqrt(x.astype(np.float64))).astype(np.int64)
        r -= (r * r > x)
        r += ((r + 1) * (r + 1) <= x)
        return (r * r == x) & (ks >= 1)

    def upto(self, n: int) -> int:
        if n < 1:
            return 0
        return isqrt(n + self.offset) - isqrt(self.offset)

    def members_upto(self, n: int) -> np.ndarray:
        lo = isqrt(self.offset) + 1
        hi = isqrt(n + self.offset) if n >= 1 else lo - 1
        if hi - lo + 1 > ENUM_BUDGET:
            raise CountUnavailable("too many squares to enumerate below %d" % n)
        j = np.arange(lo, hi + 1, dtype=np.int64)
        return j * j - self.offset


@dataclass(frozen=True)
class Finite(IndexSet):
    members: tuple = ()

    def __post_init__(self):
        ms = tuple(sorted(set(int(m) for m in self.members)))
        if ms and ms[0] < 1:
            raise ValueError("finite sets hold positive integers")
        object.__setattr__(self, "members", ms)

    def contains(self, k):
        i = bisect.bisect_left(self.members, k)
        return i < len(self.members) and self.members[i] == k

    def contains_array(self, ks):
        if not self.members:
            return np.zeros(len(ks), dtype=bool)
        return np.isin(ks, np.asarray(self.members, dtype=np.int64))

    def upto(self, n: int) -> int:
        return bisect.bisect_right(self.members, n)

    def members_upto(self, n: int) -> np.ndarray:
        return np.asarray(self.members[: self.upto(n)], dtype=np.int64)


@dataclass(frozen=True)
class BlockUnion(IndexSet):
    """Positions of one phase of a block schedule.

    ``offsets`` keeps only positions whose offset from the run start, modulo the
    phase pattern length, lies in the given set (``None`` keeps the whole run).
    ``mask`` intersects with residue classes of the final index, and ``shift``
    translates: the set is ``{k : k + shift in base}``.
    """

    schedule: BlockSchedule
    phase: int
    offsets: frozenset | None = None
    mask: Mask | None = None
    shift: int = 0

    def __post_init__(self):
        if not 0 <= self.phase < len(self.schedule.phases):
            raise ValueError("phase index out of range")
        if self.offsets is not None:
            p = self.period
            object.__setattr__(self, "offsets", frozenset(int(o) % p for o in self.offsets))
            if len(self.offsets) == p:
                object.__setattr__(self, "offsets", None)
        if self.mask is not None and self.mask.full:
            object.__setattr__(self, "mask", None)
        if self.shift < 0:
            raise ValueError("shift must be >= 0")

    @property
    def period(self) -> int:
        return len(self.schedule.phases[self.phase].pattern)

    @property
    def effective_mask(self) -> Mask:
        return self.mask or ALL_MASK

    def contains(self, k):
        if k < 1:
            return False
        _, j, off, _ = self.schedule.locate(k + self.shift)
        if j != self.phase:
            return False
        if self.offsets is not None and off % self.period not in self.offsets:
            return False
        return self.mask is None or self.mask.contains(k)

    def contains_array(self, ks):
        ks = np.asarray(ks, dtype=np.int64)
        out = np.zeros(len(ks), dtype=bool)
        if len(ks) == 0:
            return out
        orig = ks + self.shift
        sched = self.schedule
        if sched.periodic:
            period = sched.period
            pos = (orig - 1) % period  # 0-based position inside the block
            start = 0
            for j, ph in enumerate(sched.phases):
                length = ph.length(1)
                if j == self.phase:
                    inside = (pos >= start) & (pos < start + length)
                    if self.offsets is not None:
                        off = (pos - start) % self.period
                        inside &= np.isin(off, np.fromiter(self.offsets, dtype=np.int64))
                    out = inside
                    break
                start += length
        else:
            runs = list(sched.runs(int(orig.max()), self.phase))
            if not runs:
                return out
            starts = np.array([r[2] for r in runs], dtype=np.int64)
            ends = np.array([r[3] for r in runs], dtype=np.int64)
            idx = np.searchsorted(starts, orig, side="right") - 1
            ok = idx >= 0
            safe = np.where(ok, idx, 0)
            ok &= orig <= ends[safe]
            if self.offsets is not None:
                off = (orig - starts[safe]) % self.period
                ok &= np.isin(off, np.fromiter(self.offsets, dtype=np.int64))
            out = ok
        if self.mask is not None:
            out &= self.mask.contains_array(ks)
        return out & (ks >= 1)

    def pieces(self, n: int):
        """Yield ``(start, end, Mask)`` pieces in final coordinates, clipped to ``[1, n]``."""
        p = self.period
        for _, _, s0, e0 in self.schedule.runs(n + self.shift, self.phase):
            s, e = s0 - self.shift, e0 - self.shift
            if e < 1:
                continue
            s, e = max(s, 1), min(e, n)
            if self.offsets is None:
                m = ALL_MASK
            else:
                m = Mask(p, frozenset(s0 - self.shift + o for o in self.offsets))
            if self.mask is not None:
                m = combine_masks(m, self.mask)
            if not m.empty:
                yield s, e, m


@dataclass(frozen=True)
class Complement(IndexSet):
    inner: IndexSet

    def contains(self, k):
        return k >= 1 and not self.inner.contains(k)

    def contains_array(self, ks):
        return ~self.inner.contains_array(ks) & (ks >= 1)


@dataclass(frozen=True)
class Union(IndexSet):
    left: IndexSet
    right: IndexSet

    def contains(self, k):
        return self.left.contains(k) or self.right.contains(k)

    def contains_array(self, ks):
        return self.left.contains_array(ks) | self.right.contains_array(ks)


@dataclass(frozen=True)
class Intersection(IndexSet):
    left: IndexSet
    right: IndexSet

    def contains(self, k):
        return self.left.contains(k) and self.right.contains(k)

    def contains_array(self, ks):
        return self.left.contains_array(ks) & self.right.contains_array(ks)


ALL = Residues(1, frozenset({0}))
EMPTY = Finite(())
EVENS = Residues(2, frozenset({0}))
ODDS = Residues(2, frozenset({1}))
SQUARES = PerfectSquares()


def is_all(s: IndexSet) -> bool:
    return isinstance(s, Residues) and len(s.residues) == s.modulus


def is_empty(s: IndexSet) -> bool:
    return (isinstance(s, Finite) and not s.members) or (isinstance(s, Residues) and not s.residues)


# -- simplifying constructors -------------------------------------------------

def union_of(*sets: IndexSet) -> IndexSet:
    out = None
    for s in sets:
        if is_empty(s):
            continue
        if is_all(s):
            return ALL
        if out is None:
            out = s
        elif out != s:
            out = Union(out, s)
    return EMPTY if out is None else out


def intersect(*sets: IndexSet) -> IndexSet:
    out = None
    for s in sets:
        if is_empty(s):
            return EMPTY
        if is_all(s):
            continue
        if out is None:
            out = s
        elif out != s:
            out = Intersection(out, s)
    return ALL if out is None else out


def complement_of(s: IndexSet) -> IndexSet:
    if isinstance(s, Complement):
        return s.inner
    if is_all(s):
        return EMPTY
    if is_empty(s):
        return ALL
    if isinstance(s, Residues):
        return Residues(s.modulus, frozenset(range(s.modulus)) - s.residues)
    return Complement(s)


def finite_members(s: IndexSet) -> tuple | None:
    """Members of ``s`` when its structure shows it is finite, else ``None``."""
    if isinstance(s, Finite):
        return s.members
    if is_empty(s):
        return ()
    if isinstance(s, Intersection):
        for a, b in ((s.left, s.right), (s.right, s.left)):
            ms = finite_members(a)
            if ms is not None:
                return tuple(m for m in ms if b.contains(m))
    if isinstance(s, Union):
        a, b = finite_members(s.left), finite_members(s.right)
        if a is not None and b is not None:
            return tuple(sorted(set(a) | set(b)))
    return None


def initial_segment(n: int) -> IndexSet:
    """``{1, ..., n}``."""
    return Finite(tuple(range(1, n + 1))) if n <= 64 else Complement(ArithmeticProgression(n + 1, 1))


# -- translation --------------------------------------------------------------

def shift_set(s: IndexSet, t: int) -> IndexSet:
    """``{k >= 1 : k + t in s}``; the index set of the drop-``t`` shift."""
    if t == 0:
        return s
    if t < 0:
        raise ValueError("shift must be >= 0")
    if isinstance(s, Residues):
        return Residues(s.modulus, frozenset(r - t for r in s.residues))
    if isinstance(s, ArithmeticProgression):
        first = s.first - t
        if first < 1:
            first += -(-(1 - first) // s.step) * s.step
        return ArithmeticProgression(first, s.step)
    if isinstance(s, PerfectSquares):
        return PerfectSquares(s.offset + t)
    if isinstance(s, Finite):
        return Finite(tuple(m - t for m in s.members if m - t >= 1))
    if isinstance(s, BlockUnion):
        mask = s.mask.shifted(t) if s.mask is not None else None
        return BlockUnion(s.schedule, s.phase, s.offsets, mask, s.shift + t)
    if isinstance(s, Complement):
        return Complement(shift_set(s.inner, t))
    if isinstance(s, Union):
        return Union(shift_set(s.left, t), shift_set(s.right, t))
    if isinstance(s, Intersection):
        return Intersection(shift_set(s.left, t), shift_set(s.right, t))
    raise TypeError("unknown index set %r" % (s,))


# -- normalisation ------------------------------------------------------------

def set_period(s: IndexSet) -> int | None:
    """Period of ``s`` when membership is purely periodic from ``k = 1``."""
    if isinstance(s, Residues):
        return s.modulus
    if isinstance(s, ArithmeticProgression):
        return s.step if s.pure else None
    if isinstance(s, Finite):
        return 1 if not s.members else None
    if isinstance(s, BlockUnion):
        if not s.schedule.periodic:
            return None
        return lcm(s.schedule.period, s.effective_mask.modulus)
    if isinstance(s, Complement):
        return set_period(s.inner)
    if isinstance(s, (Union, Intersection)):
        a, b = set_period(s.left), set_period(s.right)
        if a is None or b is None:
            return None
        return lcm(a, b)
    return None


def _compile(s: IndexSet, period: int) -> Residues:
    ks = np.arange(1, period + 1, dtype=np.int64)
    hit = ks[s.contains_array(ks)]
    return Residues(period, frozenset(int(k) % period for k in hit))


@lru_cache(maxsize=8192)
def normalize(s: IndexSet) -> IndexSet:
    """Equivalent set with periodic subtrees compiled to ``Residues`` and residue
    intersections folded into block unions."""
    if isinstance(s, (Residues, PerfectSquares, Finite)):
        return s
    if isinstance(s, ArithmeticProgression):
        return Residues(s.step, frozenset({s.first})) if s.pure else s
    p = set_period(s)
    if p is not None and p <= MASK_BUDGET:
        return _compile(s, p)
    if isinstance(s, BlockUnion):
        return s
    if isinstance(s, Complement):
        inner = normalize(s.inner)
        return complement_of(inner)
    left, right = normalize(s.left), normalize(s.right)
    if isinstance(s, Union):
        return union_of(left, right)
    if isinstance(right, BlockUnion) and isinstance(left, Residues):
        left, right = right, left
    if isinstance(left, BlockUnion) and isinstance(right, Residues):
        m = combine_masks(left.effective_mask, right.mask)
        if m.empty:
            return EMPTY
        return BlockUnion(left.schedule, left.phase, left.offsets, m, left.shift)
    return intersect(left, right)


# -- counting -----------------------------------------------------------------

def atom_count(s: IndexSet) -> int:
    """Number of leaf sets in the expression tree."""
    kids = [getattr(s, a) for a in ("inner", "left", "right") if hasattr(s, a)]
    return 1 if not kids else sum(atom_count(k) for k in kids)


def enumerate_count(s: IndexSet, n: int) -> int:
    """Prefix count by direct vectorized membership tests."""
    total = 0
    for lo in range(1, n + 1, 1 << 20):
        ks = np.arange(lo, min(n, lo + (1 << 20) - 1) + 1, dtype=np.int64)
        total += int(np.count_nonzero(s.contains_array(ks)))
    return total


def prefers_enumeration(s: IndexSet, n: int) -> bool:
    """Large expressions over short prefixes are cheaper to enumerate than to expand."""
    return n <= FAST_ENUM and atom_count(s) > FAST_ENUM_ATOMS


def prefix_count(s: IndexSet, n: int) -> int:
    """``|s ∩ {1, ..., n}|`` as an exact integer."""
    n = int(n)
    if n < 1:
        return 0
    s = normalize(s)
    if prefers_enumeration(s, n):
        return enumerate_count(s, n)
    return _count((s,), (), n)


def _count(pos: tuple, neg: tuple, n: int) -> int:
    for i, s in enumerate(pos):
        rest = pos[:i] + pos[i + 1:]
        if is_empty(s):
            return 0
        if is_all(s):
            return _count(rest, neg, n)
        if isinstance(s, Intersection):
            return _count(rest + (s.left, s.right), neg, n)
        if isinstance(s, Complement):
            return _count(rest, neg + (s.inner,), n)
        if isinstance(s, Union):
            # |P & (A | B)| = |P & A| + |P & B & !A|
            return (_count(rest + (s.left,), neg, n)
                    + _count(rest + (s.right,), neg + (s.left,), n))
    if neg:
        b, rest = neg[0], neg[1:]
        if b in pos:
            return 0
        return _count(pos, rest, n) - _count(pos + (b,), rest, n)
    return _count_atoms(pos, n)


def _count_atoms(atoms: tuple, n: int) -> int:
    if not atoms:
        return n
    if len(atoms) == 1:
        a = atoms[0]
        if isinstance(a, (PerfectSquares, Finite)):
            return a.upto(n)
        if isinstance(a, Residues):
            return a.mask.upto(n)
    sparse = [a for a in atoms if isinstance(a, (PerfectSquares, Finite))]
    if sparse:
        pivot = min(sparse, key=lambda a: a.upto(n))
        ks = pivot.members_upto(n)
        keep = np.ones(len(ks), dtype=bool)
        for a in atoms:
            if a is not pivot and len(ks):
                keep &= a.contains_array(ks)
        return int(keep.sum())
    pieces = None
    for a in atoms:
        p = list(_pieces(a, n))
        pieces = p if pieces is None else _intersect_pieces(pieces, p)
        if not pieces:
            return 0
    return sum(m.between(s, e) for s, e, m in pieces)


def _pieces(a: IndexSet, n: int):
    if isinstance(a, Residues):
        return [(1, n, a.mask)]
    if isinstance(a, ArithmeticProgression):
        if a.first > n:
            return []
        return [(a.first, n, Mask(a.step, frozenset({a.first})))]
    if isinstance(a, BlockUnion):
        return a.pieces(n)
    raise CountUnavailable("no closed-form count for %r" % (a,))


def _intersect_pieces(xs: list, ys: list) -> list:
    out = []
    i = j = 0
    while i < len(xs) and j < len(ys):
        s1, e1, m1 = xs[i]
        s2, e2, m2 = ys[j]
        s, e = max(s1, s2), min(e1, e2)
        if s <= e:
            m = combine_masks(m1, m2)
            if not m.empty:
                out.append((s, e, m))
        if e1 < e2:
            i += 1
        else:
            j += 1
    return out


def count_between(s: IndexSet, lo: int, hi: int) -> int:
    return prefix_count(s, hi) - prefix_count(s, lo - 1)
