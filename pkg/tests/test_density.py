import random
from fractions import Fraction

import numpy as np
import pytest

import oracles
from summakit.density import empirical_density, exact_density, geometric_grid, residual_threshold
from summakit.generators import (
    exact_union_bounds, random_disjoint_density_pair, random_index_set, random_zero_density_set,
)
from summakit.seqspec import (
    EVENS, SQUARES, ArithmeticProgression, BlockUnion, Complement, Finite, Residues, Union,
    intersect, parse_sequence, parse_set, union_of,
)

ZERO_ONE = "blocks(i=1..: const(0)*100^i, const(1)*10^i)"
ALT_EVENS = "blockset(blocks(i=1..: alt(1,0)*100^i, const(1)*10^i), 2, mask(2; 0))"


def test_exact_density_examples():
    assert exact_density(SQUARES) == 0
    assert exact_density(ArithmeticProgression(2, 2)) == Fraction(1, 2)
    assert exact_density(parse_set(ALT_EVENS)) == 0
    assert exact_density(Finite((1, 5))) == 0
    assert exact_density(Complement(ArithmeticProgression(1, 3))) == Fraction(2, 3)
    assert exact_density(Residues(6, frozenset({1, 5}))) == Fraction(1, 3)


def test_dominant_phase_share():
    zeros = BlockUnion(parse_sequence(ZERO_ONE).schedule, 0)
    assert exact_density(BlockUnion(parse_sequence(ZERO_ONE).schedule, 1)) == 0
    assert exact_density(zeros) == 1
    assert exact_density(intersect(zeros, EVENS)) == Fraction(1, 2)


def test_undecided_union_reports_none():
    # a set whose prefix share oscillates has no natural density
    wobble = BlockUnion(parse_sequence("blocks(i=1..: const(0)*10^i, const(1)*10^i)").schedule, 1)
    assert exact_density(wobble) is None


def test_squares_density_at_one_million_is_exact():
    est = empirical_density(SQUARES, 10 ** 6)
    assert est.trajectory[-1] == (10 ** 6, 0.001)
    assert est.exact == 0
    assert est.consistent


def test_evens_trajectory():
    est = empirical_density(EVENS, 10 ** 6)
    assert abs(est.last - 0.5) <= 1e-6
    assert est.converged


def test_ones_of_zero_one_blocks_stay_small_at_boundaries():
    ones = BlockUnion(parse_sequence(ZERO_ONE).schedule, 1)
    b = oracles.boundaries(4)
    est = empirical_density(ones, b[-1], extra=b)
    at_b = {n: v for n, v in est.trajectory if n in b}
    assert set(at_b) == set(b)
    assert max(at_b.values()) <= 0.11
    # cross-check the closed-form counts against enumeration through b_3
    n = b[2]
    flags = np.zeros(n + 1, dtype=bool)
    flags[1:] = np.array(oracles.zero_one_blocks(n)) == 1
    for m in b[:3]:
        assert at_b[m] == flags[:m + 1].sum() / m


def test_trajectory_values_in_unit_interval():
    rng = random.Random(3)
    for _ in range(30):
        est = empirical_density(random_index_set(rng), 50000)
        assert all(0 <= v <= 1 for _, v in est.trajectory)
        if est.exact is not None:
            assert est.consistent


def test_grid_and_threshold():
    assert geometric_grid(10) == [1, 2, 4, 8, 10]
    assert geometric_grid(100, 10.0, extra=(55,)) == [1, 10, 55, 100]
    assert residual_threshold(10 ** 6) == 0.01
    with pytest.raises(ValueError):
        geometric_grid(100, 1.0)
    with pytest.raises(ValueError):
        empirical_density(SQUARES, 5)


def test_union_bounds_where_all_densities_exist():
    rng = random.Random(41)
    checked = 0
    for _ in range(300):
        c, d = random_disjoint_density_pair(rng)
        dc, dd, du = exact_density(c), exact_density(d), exact_density(Union(c, d))
        if None in (dc, dd, du):
            continue
        lo, hi = exact_union_bounds(dc, dd)
        assert lo <= du <= hi
        checked += 1
    assert checked >= 200


def test_zero_density_is_closed_under_union_and_subsets():
    rng = random.Random(42)
    for _ in range(200):
        a, b = random_zero_density_set(rng), random_zero_density_set(rng)
        assert exact_density(a) == 0 and exact_density(b) == 0
        assert exact_density(union_of(a, b)) == 0
        assert exact_density(intersect(a, random_index_set(rng))) == 0


def test_complement_densities_sum_to_one():
    rng = random.Random(43)
    for _ in range(200):
        a = random_index_set(rng)
        d, e = exact_density(a), exact_density(Complement(a))
        if d is not None and e is not None:
            assert d + e == 1


def test_exact_density_matches_long_prefix():
    rng = random.Random(44)
    for _ in range(60):
        a = random_index_set(rng)
        d = exact_density(a)
        if d is None:
            continue
        est = empirical_density(a, 10 ** 6)
        assert abs(est.last - float(d)) <= 0.05, a
