"""The worked example sequences with the classifications claimed for them."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnknownFixture
from .gasconv import Classification, Modification, classify
from .seqspec.dsl import parse_modification, parse_spec
from .seqspec.spec import SequenceSpec
from .verdict import Status

LIMIT_TOL = 1e-6
FLAGS = ("usual", "statistical", "almost", "GAS")

# the set where the ones phase of the alternating block sequence sits at an even index
_GAS_BLOCKS = "blocks(i=1..: alt(1,0)*100^i, const(1)*10^i)"
_GAS_BLOCKS_WITNESS = "blockset(%s, 2, mask(2; 0)) -> const(0)" % _GAS_BLOCKS


@dataclass(frozen=True)
class Expectation:
    status: Status
    limit: float | None = None

    def matches(self, verdict) -> bool:
        if verdict is None or verdict.status is not self.status:
            return False
        if self.limit is None:
            return True
        return verdict.limit is not None and abs(verdict.limit - self.limit) <= LIMIT_TOL

    def __str__(self):
        return "Converges(%g)" % self.limit if self.status is Status.CONVERGES else self.status.value


def _conv(limit):
    return Expectation(Status.CONVERGES, limit)


_REFUTED = Expectation(Status.REFUTED)


@dataclass(frozen=True)
class Fixture:
    """``expected`` maps flag names to an ``Expectation``; a missing flag carries no claim."""

    name: str
    source: str
    expected: dict
    provenance: str
    witness_source: str | None = None
    n_max: int | None = None

    @property
    def spec(self) -> SequenceSpec:
        return parse_spec(self.source)

    @property
    def witness(self) -> Modification | None:
        if self.witness_source is None:
            return None
        return Modification(*parse_modification(self.witness_source))


_B4 = 101021210  # fourth boundary of the 100^i / 10^i block schedules

_FIXTURES = {
    f.name: f for f in (
        Fixture(
            "lambda_squares", "overlay(const(0); squares -> index)",
            {"usual": _REFUTED, "statistical": _conv(0.0)},
            "the index itself on perfect squares, 0 elsewhere",
        ),
        Fixture(
            "alt_1_0", "periodic(1,0)",
            {"usual": _REFUTED, "statistical": _REFUTED, "almost": _conv(0.5), "GAS": _conv(0.5)},
            "1, 0, 1, 0, ...",
        ),
        Fixture(
            "blocks_0_1", "blocks(i=1..: const(0)*100^i, const(1)*10^i)",
            {"usual": _REFUTED, "statistical": _conv(0.0), "almost": _REFUTED, "GAS": _conv(0.0)},
            "100^i zeros then 10^i ones, block after block",
            n_max=_B4,
        ),
        Fixture(
            "five_parity", "overlay(parity(1,0); squares -> const(5))",
            {"usual": _REFUTED, "statistical": _REFUTED, "GAS": _conv(0.5)},
            "5 on perfect squares, else 1 at odd and 0 at even indices",
            witness_source="squares -> parity(1,0)",
        ),
        Fixture(
            "gas_blocks", _GAS_BLOCKS,
            {"usual": _REFUTED, "statistical": _REFUTED, "almost": _REFUTED, "GAS": _conv(0.5)},
            "100^i terms alternating 1, 0 then 10^i ones, block after block",
            witness_source=_GAS_BLOCKS_WITNESS,
            n_max=_B4,
        ),
    )
}

FIXTURE_NAMES = tuple(_FIXTURES)


def fixture(name: str) -> Fixture:
    try:
        return _FIXTURES[name]
    except KeyError:
        raise UnknownFixture("unknown fixture %r (known: %s)" % (name, ", ".join(FIXTURE_NAMES))) from None


@dataclass(frozen=True)
class CheckResult:
    fixture: Fixture
    classification: Classification
    mismatches: tuple  # (flag, expected, got)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def check(fx: Fixture | str, n_max: int | None = None) -> CheckResult:
    """Classify a fixture and compare every flag that carries an expectation."""
    if isinstance(fx, str):
        fx = fixture(fx)
    c = classify(fx.spec, fx.witness, n_max or fx.n_max)
    flags = c.flags()
    bad = tuple((k, str(e), str(flags[k])) for k, e in fx.expected.items() if not e.matches(flags[k]))
    return CheckResult(fx, c, bad)


__all__ = ["FIXTURE_NAMES", "Expectation", "Fixture", "CheckResult", "check", "fixture"]
