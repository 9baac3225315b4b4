import random

import numpy as np
import pytest

import oracles
from summakit.errors import WitnessUnavailable
from summakit.generators import random_stat_convergent
from summakit.seqspec import (
    SQUARES, Complement, Constant, Periodic, Sum, Telescoped, add, affine,
    is_empty, parse_sequence,
)
from summakit.seqspec.sets import is_all
from summakit.statconv import (
    density_one_subsequence, exceedance_set, recenter, stat_limit, telescope, usual_limit,
)

LAMBDA = "overlay(const(0); squares -> index)"
ZERO_ONE = "blocks(i=1..: const(0)*100^i, const(1)*10^i)"
FIVE_PARITY = "overlay(parity(1,0); squares -> const(5))"
ALT_BLOCKS = "blocks(i=1..: alt(1,0)*100^i, const(1)*10^i)"
B4 = oracles.boundaries(4)[-1]


def _members(s, n):
    return np.flatnonzero(s.contains_array(np.arange(1, n + 1))) + 1


def test_exceedance_examples():
    n = 10 ** 4
    lam = exceedance_set(parse_sequence(LAMBDA), 0, 0.5)
    assert list(_members(lam, n)) == [k for k in range(1, n + 1) if oracles.is_square(k)]
    assert is_empty(exceedance_set(Periodic((1, 0)), 0.5, 0.6))
    five = exceedance_set(parse_sequence(FIVE_PARITY), 0, 0.5)
    want = [k for k, x in enumerate(oracles.five_parity(n), start=1) if x > 0.5]
    assert list(_members(five, n)) == want


def test_exceedance_membership_matches_terms():
    rng = random.Random(17)
    specs = [parse_sequence(s) for s in (LAMBDA, ZERO_ONE, FIVE_PARITY, ALT_BLOCKS, "explicit(4,0,1; periodic(1,2,3))",
                                         "shift(overlay(periodic(0,1); squares -> parity(2,-2)), 3)",
                                         "affine(periodic(1,0,2), -2, 1)")]
    specs += [random_stat_convergent(rng)[0] for _ in range(40)]
    n = 10 ** 5
    for spec in specs:
        x = spec.terms(1, n + 1)
        for ell, eps in ((0, 0.5), (1, 0.25), (0.5, 0.6), (-1, 1.5)):
            got = exceedance_set(spec, ell, eps).contains_array(np.arange(1, n + 1))
            assert np.array_equal(got, np.abs(x - ell) > eps), (spec, ell, eps)


def test_exceedance_needs_positive_eps():
    with pytest.raises(ValueError):
        exceedance_set(Constant(1), 0, 0)


def test_stat_limit_examples():
    v = stat_limit(parse_sequence(ZERO_ONE), B4)
    assert v.converges and v.limit == 0
    v = stat_limit(Periodic((1, 0)))
    assert v.refuted and v.diagnostics["lower_bound"] >= 0.05
    assert stat_limit(Constant(7)).limit == 7
    assert stat_limit(parse_sequence(FIVE_PARITY)).refuted
    assert stat_limit(parse_sequence(LAMBDA)).limit == 0


def test_alternating_refutation_uses_quarter():
    v = stat_limit(Periodic((1, 0)), eps_grid=(0.25,))
    assert v.refuted and v.diagnostics["witness_eps"] == 0.25
    assert v.diagnostics["lower_bound"] >= 0.5 - 1e-9


def test_converges_diagnostics_are_complete():
    v = stat_limit(parse_sequence(LAMBDA), 10 ** 6)
    d = v.diagnostics
    assert d["n_max"] == 10 ** 6 and d["threshold"] == 0.01
    assert set(d["trajectories"]) == {"eps=%r" % e for e in (0.5, 0.25, 0.1, 0.01, 0.001)}
    for rows in d["trajectories"].values():
        assert rows[-1][0] == 10 ** 6 and rows[-1][1] <= d["threshold"]


def test_stat_limit_rejects_bad_grid():
    with pytest.raises(ValueError):
        stat_limit(Constant(1), eps_grid=())
    with pytest.raises(ValueError):
        stat_limit(Constant(1), eps_grid=(0.1, -1))


def test_wrong_candidate_is_not_accepted():
    v = stat_limit(parse_sequence(ZERO_ONE), B4, candidate=1.0)
    assert not v.converges


def test_streaming_fallback_for_mixed_kinds():
    spec = Sum(parse_sequence(LAMBDA), Constant(2))
    v = stat_limit(spec, 10 ** 5)
    assert v.converges and v.limit == 2 and v.diagnostics["mode"] == "streaming"


def test_density_one_subsequence_examples():
    j = density_one_subsequence(parse_sequence(LAMBDA), 0)
    assert j == Complement(SQUARES)
    lam = parse_sequence(LAMBDA)
    ks = _members(j, 10 ** 4)
    assert np.all(lam.values_at(ks) == 0)
    assert is_all(density_one_subsequence(Constant(7), 7))
    zero_one = parse_sequence(ZERO_ONE)
    j3 = density_one_subsequence(zero_one, 0)
    n = oracles.boundaries(3)[-1]
    ks = _members(j3, n)
    want = [k for k, x in enumerate(oracles.zero_one_blocks(n), start=1) if x == 0]
    assert list(ks) == want


def test_density_one_subsequence_needs_symbolic_sets():
    with pytest.raises(WitnessUnavailable):
        density_one_subsequence(Telescoped(parse_sequence(LAMBDA)), 0)
    with pytest.raises(WitnessUnavailable):
        density_one_subsequence(Periodic((1, 0)), 0.5)


def test_density_one_subsequence_terms_converge():
    rng = random.Random(23)
    for _ in range(40):
        spec, ell = random_stat_convergent(rng)
        j = density_one_subsequence(spec, ell)
        ks = _members(j, 10 ** 5)
        tail = spec.values_at(ks[len(ks) // 2:])
        assert np.all(np.abs(tail - ell) <= 1e-3)


def test_telescope_and_recenter_examples():
    assert telescope(Constant(7)) == Constant(0)
    assert telescope(Periodic((1, 0))) == Periodic((1, -1))
    assert stat_limit(telescope(parse_sequence(LAMBDA)), 10 ** 6).limit == 0
    assert recenter(Constant(7), 7) == Constant(0)
    zero_one = parse_sequence(ZERO_ONE)
    assert recenter(zero_one, 0) is zero_one
    lam = parse_sequence(LAMBDA)
    assert recenter(lam, 0) is lam


def test_usual_limit():
    assert usual_limit(Constant(3)).limit == 3
    assert usual_limit(parse_sequence("explicit(9,9,9; const(2))")).limit == 2
    assert usual_limit(parse_sequence(LAMBDA)).refuted
    assert usual_limit(Periodic((1, 0))).refuted
    assert usual_limit(parse_sequence(ZERO_ONE)).refuted
    assert usual_limit(parse_sequence("overlay(const(1); finite(3,9) -> const(4))")).limit == 1


def test_linearity_of_statistical_limits():
    rng = random.Random(31)
    for _ in range(25):
        (x, a), (y, b) = random_stat_convergent(rng), random_stat_convergent(rng)
        v = stat_limit(add(x, y), 1 << 17)
        assert v.converges and abs(v.limit - (a + b)) <= 1e-9
        w = stat_limit(affine(x, -3, 0), 1 << 17)
        assert w.converges and abs(w.limit + 3 * a) <= 1e-9


def test_limit_respects_bound():
    rng = random.Random(32)
    for _ in range(40):
        spec, _ = random_stat_convergent(rng)
        v = stat_limit(spec, 1 << 16)
        assert abs(v.limit) <= spec.bound()


def test_eventually_constant_specs_converge_everywhere():
    for text, c in (("const(4)", 4), ("explicit(1,2,3; const(-1))", -1),
                    ("overlay(const(2); finite(5,6) -> const(0))", 2)):
        spec = parse_sequence(text)
        assert stat_limit(spec).limit == c
        assert usual_limit(spec).limit == c
