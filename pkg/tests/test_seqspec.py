import random

import numpy as np
import pytest

import oracles
from summakit.errors import ParseError
from summakit.generators import random_index_set, random_periodic, random_stat_convergent
from summakit.seqspec import (
    ALL, EMPTY, EVENS, SQUARES, ArithmeticProgression, BlockSchedule, Blocks, BlockUnion,
    Complement, Constant, ConstantValue, Explicit, Finite, IndexValue, Mask, Overlay,
    ParityValue, Periodic, PerfectSquares, Phase, PhaseLength, Union, add, affine,
    complement_of, count_between, intersect, parse_modification, parse_sequence, parse_set,
    parse_spec, prefix_count, render, shift, shift_set, telescope, term, union_of,
)
from summakit.seqspec.sets import atom_count, normalize

LAMBDA = "overlay(const(0); squares -> index)"
ZERO_ONE = "blocks(i=1..: const(0)*100^i, const(1)*10^i)"
FIVE_PARITY = "overlay(parity(1,0); squares -> const(5))"
ALT_BLOCKS = "blocks(i=1..: alt(1,0)*100^i, const(1)*10^i)"
ALT_EVENS = "blockset(%s, 2, mask(2; 0))" % ALT_BLOCKS


def terms(spec, n):
    return spec.terms(1, n + 1)


# -- schedules ----------------------------------------------------------------

def test_alternating_block_boundaries_match_closed_sum():
    sched = parse_sequence(ALT_BLOCKS).schedule
    assert [sched.boundary(i) for i in range(1, 7)] == oracles.boundaries(6)
    assert sched.boundary(2) == 10210


def test_boundaries_are_exact_beyond_64_bits():
    sched = parse_sequence(ALT_BLOCKS).schedule
    assert sched.boundary(12) == oracles.boundaries(12)[-1]
    assert sched.boundary(12) > 2 ** 64


def test_locate_and_block_of_agree_with_boundaries():
    sched = parse_sequence(ZERO_ONE).schedule
    b1, b2 = oracles.boundaries(2)
    assert sched.block_of(b1) == 1 and sched.block_of(b1 + 1) == 2
    assert sched.locate(100) == (1, 0, 99, 1)
    assert sched.locate(101)[:2] == (1, 1)
    assert sched.locate(b2)[:2] == (2, 1)


def test_phase_length_canonical_form():
    assert PhaseLength(3, 1, 2) == PhaseLength.fixed(5)
    assert PhaseLength.geometric(100)(3) == 10 ** 6
    with pytest.raises(ValueError):
        PhaseLength(0, 1, -1)


def test_periodic_schedule_blocks_match_repetition():
    spec = Blocks(BlockSchedule((Phase((1, 2), PhaseLength.fixed(4)), Phase((7,), PhaseLength.fixed(1)))))
    assert spec.period() == 5
    assert list(terms(spec, 10)) == [1, 2, 1, 2, 7] * 2


# -- terms --------------------------------------------------------------------

@pytest.mark.parametrize("source, oracle", [
    (LAMBDA, oracles.lambda_squares),
    ("periodic(1,0)", oracles.alternating),
    (ZERO_ONE, oracles.zero_one_blocks),
    (FIVE_PARITY, oracles.five_parity),
    (ALT_BLOCKS, oracles.alternating_blocks),
])
def test_catalog_terms_match_transcription(source, oracle):
    n = 12000
    assert list(terms(parse_sequence(source), n)) == oracle(n)


def test_scalar_and_vector_terms_agree():
    for source in (LAMBDA, ZERO_ONE, FIVE_PARITY, ALT_BLOCKS, "explicit(3,4; periodic(1,2,3))"):
        spec = parse_sequence(source)
        ks = [1, 2, 3, 99, 100, 101, 110, 111, 10210, 10211]
        assert [spec.term(k) for k in ks] == list(spec.values_at(np.array(ks)))


def test_term_examples():
    assert term(Periodic((1, 0)), 1) == 1
    assert term(parse_sequence(LAMBDA), 9) == 9
    assert term(parse_sequence(FIVE_PARITY), 4) == 5
    with pytest.raises(ValueError):
        term(Periodic((1, 0)), 0)


def test_five_parity_listing():
    listed = [5, 0, 1, 5, 1, 0, 1, 0, 5, 0, 1, 0, 1, 0, 1, 5, 1, 0, 1, 0, 1, 0, 1, 0, 5, 0]
    assert list(terms(parse_sequence(FIVE_PARITY), len(listed))) == listed


def test_later_override_wins():
    spec = Overlay(Constant(0), ((EVENS, ConstantValue(1)), (SQUARES, ConstantValue(2))))
    assert list(terms(spec, 6)) == [2, 1, 0, 2, 0, 1]


def test_explicit_head_replaces_prefix():
    spec = Explicit((9, 9), Periodic((1, 2, 3)))
    assert list(terms(spec, 6)) == [9, 9, 3, 1, 2, 3]


def test_bounds_hold_on_sampled_prefixes():
    rng = random.Random(11)
    specs = [parse_sequence(s) for s in (ZERO_ONE, FIVE_PARITY, ALT_BLOCKS)]
    specs += [random_stat_convergent(rng)[0] for _ in range(40)]
    for spec in specs:
        m = spec.bound()
        assert np.all(np.abs(terms(spec, 5000)) <= m)
    assert parse_sequence(LAMBDA).bound() is None
    assert Overlay(Constant(0), ((Finite((3, 8)), IndexValue()),)).bound() == 8


def test_chunks_cover_prefix():
    spec = parse_sequence(ALT_BLOCKS)
    pieces = list(spec.chunks(2500, chunk=1000))
    assert [s for s, _ in pieces] == [1, 1001, 2001]
    assert np.array_equal(np.concatenate([a for _, a in pieces]), terms(spec, 2500))


# -- transforms ---------------------------------------------------------------

def _random_specs(seed, count):
    rng = random.Random(seed)
    out = [parse_sequence(s) for s in (LAMBDA, ZERO_ONE, FIVE_PARITY, ALT_BLOCKS)]
    for _ in range(count):
        out.append(random_stat_convergent(rng)[0])
        out.append(random_periodic(rng))
    return out


def test_shift_drops_first_terms():
    for spec in _random_specs(3, 30):
        for t in (1, 2, 5):
            assert np.array_equal(terms(shift(spec, t), 3000), spec.terms(1 + t, 3001 + t))


def test_telescope_is_consecutive_difference():
    for spec in _random_specs(4, 30):
        x = terms(spec, 3001)
        assert np.array_equal(terms(telescope(spec), 3000), x[:-1] - x[1:])


def test_telescope_examples():
    assert telescope(Constant(7)) == Constant(0)
    assert telescope(Periodic((1, 0))) == Periodic((1, -1))
    assert isinstance(telescope(parse_sequence(ZERO_ONE)), Blocks)


def test_affine_and_add_are_termwise():
    specs = _random_specs(5, 15)
    for a, b in zip(specs, specs[1:]):
        assert np.array_equal(terms(affine(a, -2, 3), 2000), -2 * terms(a, 2000) + 3)
        assert np.array_equal(terms(add(a, b), 2000), terms(a, 2000) + terms(b, 2000))


# -- index sets and counting --------------------------------------------------

def _brute_counts(s, n):
    flags = np.zeros(n + 1, dtype=bool)
    flags[1:] = s.contains_array(np.arange(1, n + 1, dtype=np.int64))
    return oracles.prefix_counts(flags)


def test_squares_count_is_integer_sqrt():
    assert prefix_count(SQUARES, 10 ** 6) == 1000
    assert prefix_count(SQUARES, 10 ** 30) == 10 ** 15
    assert prefix_count(PerfectSquares(), 15) == 3


def test_ap_example():
    assert prefix_count(ArithmeticProgression(2, 2), 7) == 3


def test_even_ones_set_at_second_boundary():
    e = parse_set(ALT_EVENS)
    want = oracles.ones_phase_evens(10210)
    assert prefix_count(e, 10210) == len(want) == 55


def test_even_ones_set_membership():
    n = 1_100_000
    e = parse_set(ALT_EVENS)
    flags = oracles.membership(oracles.ones_phase_evens(n), n)
    assert np.array_equal(e.contains_array(np.arange(1, n + 1)), flags[1:])
    for m in (110, 10210, 1011210):
        assert prefix_count(e, m) == int(flags[:m + 1].sum())


@pytest.fixture
def closed_form_only(monkeypatch):
    """Disable the enumeration shortcut so counts come from set arithmetic."""
    import summakit.seqspec.sets as sets
    monkeypatch.setattr(sets, "FAST_ENUM", 0)


def _compound_sets(seed, count):
    """Generated sets that stay compound after normalization."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        s = random_index_set(rng, depth=3)
        if atom_count(normalize(s)) >= 3:
            out.append(s)
    return out


def test_random_sets_count_like_enumeration(closed_form_only):
    n = 20000
    for s in _compound_sets(2024, 60):
        want = _brute_counts(s, n)
        for m in list(range(1, 300)) + list(range(300, n + 1, 97)) + [n]:
            assert prefix_count(s, m) == want[m], (s, m)


def test_complement_and_disjoint_union_laws(closed_form_only):
    rng = random.Random(77)
    for a in _compound_sets(77, 40):
        b = intersect(random_index_set(rng), complement_of(a))
        for n in (1, 17, 1000, 54321):
            assert prefix_count(Complement(a), n) == n - prefix_count(a, n)
            assert prefix_count(Union(a, b), n) == prefix_count(a, n) + prefix_count(b, n)


def test_counts_are_monotone_and_bounded():
    rng = random.Random(8)
    for _ in range(30):
        s = random_index_set(rng)
        counts = [prefix_count(s, n) for n in range(1, 400)]
        assert all(0 <= c <= n for n, c in enumerate(counts, start=1))
        assert all(a <= b for a, b in zip(counts, counts[1:]))


def test_count_between():
    assert count_between(SQUARES, 10, 100) == 7


def test_shift_set_membership():
    rng = random.Random(9)
    ks = np.arange(1, 3000)
    for _ in range(40):
        s = random_index_set(rng)
        for t in (1, 3):
            assert np.array_equal(shift_set(s, t).contains_array(ks), s.contains_array(ks + t))


def test_block_counts_far_out():
    # counts through large boundaries come from block arithmetic, not enumeration
    ones = BlockUnion(parse_sequence(ZERO_ONE).schedule, 1)
    b = oracles.boundaries(9)
    assert prefix_count(ones, b[-1]) == sum(10 ** j for j in range(1, 10))


def test_smart_constructors_simplify():
    assert union_of(EMPTY, SQUARES) == SQUARES
    assert intersect(ALL, SQUARES) == SQUARES
    assert complement_of(complement_of(SQUARES)) == SQUARES
    assert Mask(4, frozenset({1, 5 % 4})).upto(9) == 3


# -- DSL ----------------------------------------------------------------------

def test_parse_examples():
    assert parse_spec("periodic(1,0)") == Periodic((1, 0))
    assert parse_spec(FIVE_PARITY) == Overlay(Periodic((1, 0)), ((SQUARES, ConstantValue(5)),))
    alt_blocks = parse_spec(ALT_BLOCKS)
    assert isinstance(alt_blocks, Blocks) and len(alt_blocks.schedule.phases) == 2
    assert parse_spec("squares | ap(2,3)") == Union(SQUARES, ArithmeticProgression(2, 3))


def test_parse_modification():
    s, rule = parse_modification("squares -> parity(1,0)")
    assert s == SQUARES and rule == ParityValue(1, 0)


@pytest.mark.parametrize("text", [
    LAMBDA, ZERO_ONE, FIVE_PARITY, ALT_BLOCKS, ALT_EVENS, "periodic(1/2, -3, 0.25)", "explicit(1,2; const(3))",
    "shift(telescope(periodic(1,0,0)), 2)", "affine(sum(const(1), periodic(2,3)), -1, 1/2)",
    "!(squares | ap(1,3)) & odds", "residues(6; 1,5)", "finite()", "finite(4,1,9)",
    "blocks(i=1..: periodic(1,2)*(3*4^i+2), const(0)*7)", "shift(squares, 3)",
])
def test_render_round_trip(text):
    obj = parse_spec(text)
    assert parse_spec(render(obj)) == obj


def test_round_trip_on_generated_objects():
    rng = random.Random(5)
    for _ in range(100):
        for obj in (random_index_set(rng), random_stat_convergent(rng)[0], random_periodic(rng)):
            assert parse_spec(render(obj)) == obj


@pytest.mark.parametrize("text, position", [
    ("periodic(1,", 11), ("overlay(const(0) squares -> index)", 17), ("squares |", 9), ("bogus", 0),
])
def test_parse_errors_report_position(text, position):
    with pytest.raises(ParseError) as info:
        parse_spec(text)
    assert info.value.position == position
    assert "position %d" % position in str(info.value)
