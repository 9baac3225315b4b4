import random

import numpy as np
import pytest

import oracles
from summakit.almostconv import exact_periodic_almost_limit, lorentz_test, window_mean
from summakit.errors import UnboundedSpec
from summakit.generators import random_periodic
from summakit.seqspec import Constant, Periodic, parse_sequence, shift

LAMBDA = "overlay(const(0); squares -> index)"
ZERO_ONE = "blocks(i=1..: const(0)*100^i, const(1)*10^i)"
ALT_BLOCKS = "blocks(i=1..: alt(1,0)*100^i, const(1)*10^i)"


def test_window_mean_examples():
    assert window_mean(Periodic((1, 0)), 1, 4) == 0.5
    assert window_mean(Periodic((1, 0)), 2, 3) == pytest.approx(1 / 3)
    b1 = oracles.boundaries(1)[0]
    assert window_mean(parse_sequence(ZERO_ONE), b1 - 9, 10) == 1.0


def test_window_mean_matches_direct_sums():
    spec = parse_sequence(ALT_BLOCKS)
    x = oracles.alternating_blocks(20000)
    rng = random.Random(1)
    for _ in range(200):
        p, k = rng.randrange(1, 15000), rng.randrange(1, 5000)
        assert window_mean(spec, p, k) == pytest.approx(sum(x[p - 1:p - 1 + k]) / k)
    with pytest.raises(ValueError):
        window_mean(spec, 0, 3)


def test_periodic_window_mean_is_exact():
    rng = random.Random(2)
    for _ in range(50):
        spec = random_periodic(rng)
        p, k = rng.randrange(1, 100), rng.randrange(1, 100)
        direct = float(np.mean(spec.terms(p, p + k)))
        assert window_mean(spec, p, k) == pytest.approx(direct, abs=1e-12)


def test_lorentz_examples():
    v = lorentz_test(Periodic((1, 0)))
    assert v.converges and v.limit == 0.5
    assert lorentz_test(parse_sequence(ZERO_ONE)).refuted
    assert lorentz_test(Constant(-2.5)).limit == -2.5
    assert lorentz_test(parse_sequence(ALT_BLOCKS)).refuted


def test_block_refutation_exhibits_windows():
    v = lorentz_test(parse_sequence(ZERO_ONE))
    w = v.diagnostics["witness"]
    (p1, k1, m1), (p2, k2, m2) = w["windows"]
    x = parse_sequence(ZERO_ONE)
    assert window_mean(x, p1, k1) == m1 == 1.0
    assert window_mean(x, p2, k2) == m2 == 0.0


def test_unbounded_spec_is_rejected():
    with pytest.raises(UnboundedSpec):
        lorentz_test(parse_sequence(LAMBDA))


def test_exact_periodic_limit():
    assert exact_periodic_almost_limit(Periodic((1, 0))) == 0.5
    assert exact_periodic_almost_limit(Periodic((4,))) == 4
    assert exact_periodic_almost_limit(Periodic((3, 1, 2))) == 2
    assert exact_periodic_almost_limit(parse_sequence(ZERO_ONE)) is None
    v = lorentz_test(Periodic((3, 1, 2)), k_schedule=(3, 30, 300))
    assert v.converges and v.limit == 2
    assert all(w["sup_mean"] == w["inf_mean"] for w in v.diagnostics["windows"])


def test_random_periodic_fixtures():
    rng = random.Random(4)
    for _ in range(50):
        spec = random_periodic(rng)
        v = lorentz_test(spec)
        assert v.converges
        assert abs(v.limit - exact_periodic_almost_limit(spec)) <= 1e-6
        s = lorentz_test(shift(spec))
        assert s.status == v.status and abs(s.limit - v.limit) <= 1e-6
        lo, hi = min(spec.values), max(spec.values)
        for w in v.diagnostics["windows"]:
            assert lo - 1e-12 <= w["inf_mean"] <= w["sup_mean"] <= hi + 1e-12
        if lo >= 0:
            assert v.limit >= 0


def test_oscillation_shrinks_for_convergent_fixtures():
    for spec in (Periodic((1, 0)), Periodic((3, 1, 2, 7)), Constant(1)):
        w = lorentz_test(spec, k_schedule=(7, 70, 700)).diagnostics["windows"]
        osc = [x["sup_mean"] - x["inf_mean"] for x in w]
        assert all(b <= a + 1e-12 for a, b in zip(osc, osc[1:]))


def test_eventually_constant_spec_is_almost_convergent():
    v = lorentz_test(parse_sequence("explicit(5,5,5,5; const(1))"))
    assert v.converges and v.limit == 1


def test_shift_invariance_on_block_fixtures():
    for text in (ZERO_ONE, ALT_BLOCKS):
        spec = parse_sequence(text)
        assert lorentz_test(spec).status == lorentz_test(shift(spec)).status


def test_modified_alternating_blocks_converge():
    spec = parse_sequence(
        "overlay(%s; blockset(%s, 2, mask(2; 0)) -> const(0))" % (ALT_BLOCKS, ALT_BLOCKS))
    v = lorentz_test(spec)
    assert v.converges and v.limit == pytest.approx(0.5, abs=1e-6)
