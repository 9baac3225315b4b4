"""Text syntax for sequence specs, index sets and modifications.

Grammar (whitespace-insensitive, UTF-8)::

    spec      := 'periodic' '(' nums ')'
               | 'const' '(' num ')'
               | 'parity' '(' num ',' num ')'            # odd-index value, even-index value
               | 'blocks' '(' 'i' '=' '1' '..' ':' item (',' item)* ')'
               | 'overlay' '(' spec ';' override (',' override)* ')'
               | 'explicit' '(' nums ';' spec ')'
               | 'shift' '(' spec ',' INT ')'
               | 'telescope' '(' spec ')'
               | 'affine' '(' spec ',' num ',' num ')'   # scale, offset
               | 'sum' '(' spec ',' spec ')'
    item      := pattern '*' length
    pattern   := 'alt' '(' nums ')' | 'const' '(' num ')' | 'periodic' '(' nums ')'
    length    := lin | '(' lin ')'
    lin       := growth (('+' | '-') INT)?
    growth    := INT '*' INT '^' 'i' | INT '^' 'i' | INT
    override  := set '->' rule
    rule      := 'const' '(' num ')' | 'index' | 'parity' '(' num ',' num ')'
    set       := inter ('|' inter)*
    inter     := unary ('&' unary)*
    unary     := '!' unary | atom
    atom      := 'squares' | 'evens' | 'odds' | 'all'
               | 'ap' '(' INT ',' INT ')'
               | 'residues' '(' INT ';' [ints] ')'
               | 'finite' '(' [ints] ')'
               | 'blockset' '(' spec ',' INT (',' blockopt)* ')'   # phase counted from 1
               | 'shift' '(' set ',' INT ')'
               | '(' set ')'
    blockopt  := 'offsets' '(' ints ')' | 'mask' '(' INT ';' [ints] ')'
    modification := set '->' rule
    num       := ['-'] NUMBER ['/' NUMBER]
"""

from __future__ import annotations

import re
from fractions import Fraction

from ..errors import ParseError
from .schedule import BlockSchedule, Phase, PhaseLength
from .sets import (
    ArithmeticProgression, BlockUnion, Complement, Finite, IndexSet, Intersection,
    Mask, PerfectSquares, Residues, Union, shift_set,
)
from .spec import (
    Affine, Blocks, Constant, ConstantValue, Explicit, IndexValue, Overlay,
    ParityValue, Periodic, SequenceSpec, Shifted, Sum, Telescoped,
)

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:\.\d+)?(?:[eE][-+]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>->|\.\.|[(),;:*^|&!=+\-/])
""", re.VERBOSE)

_SPEC_WORDS = {"periodic", "const", "parity", "blocks", "overlay", "explicit",
               "shift", "telescope", "affine", "sum"}
_SET_WORDS = {"squares", "evens", "odds", "all", "ap", "residues", "finite", "blockset", "shift"}


def _tokenize(text: str) -> list:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("unexpected character %r" % text[pos], pos)
        if m.lastgroup != "ws":
            out.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    # token helpers
    @property
    def tok(self):
        return self.toks[self.i]

    def peek(self, text: str) -> bool:
        return self.tok[1] == text and self.tok[0] in ("op", "name")

    def accept(self, text: str) -> bool:
        if self.peek(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            self.fail("expected %r" % text, (repr(text),))

    def fail(self, msg, expected=()):
        kind, val, pos = self.tok
        found = "end of input" if kind == "end" else repr(val)
        raise ParseError("%s, found %s" % (msg, found), pos, expected)

    def name(self) -> str:
        kind, val, _ = self.tok
        if kind != "name":
            self.fail("expected a keyword")
        self.i += 1
        return val

    def integer(self) -> int:
        kind, val, _ = self.tok
        if kind != "num" or not val.isdigit():
            self.fail("expected an integer", ("integer",))
        self.i += 1
        return int(val)

    def number(self) -> float:
        neg = self.accept("-")
        kind, val, _ = self.tok
        if kind != "num":
            self.fail("expected a number", ("number",))
        self.i += 1
        value = Fraction(val)
        if self.accept("/"):
            den = Fraction(self.tok[1]) if self.tok[0] == "num" else None
            if not den:
                self.fail("expected a nonzero denominator", ("number",))
            self.i += 1
            value /= den
        return float(-value if neg else value)

    def numbers(self) -> list:
        vals = [self.number()]
        while self.accept(","):
            vals.append(self.number())
        return vals

    def ints(self, closer: str) -> list:
        vals = []
        if self.peek(closer):
            return vals
        vals.append(self.integer())
        while self.accept(","):
            vals.append(self.integer())
        return vals

    def done(self):
        if self.tok[0] != "end":
            self.fail("trailing input", ("end of input",))

    # sequences
    def spec(self) -> SequenceSpec:
        _, _, pos = self.tok
        word = self.name()
        if word not in _SPEC_WORDS:
            self.i -= 1
            self.fail("unknown sequence kind", tuple(sorted(_SPEC_WORDS)))
        self.expect("(")
        if word == "periodic":
            out = Periodic(tuple(self.numbers()))
        elif word == "const":
            out = Constant(self.number())
        elif word == "parity":
            a = self.number()
            self.expect(",")
            out = Periodic((a, self.number()))
        elif word == "blocks":
            out = self.blocks()
        elif word == "overlay":
            base = self.spec()
            self.expect(";")
            overrides = [self.override()]
            while self.accept(","):
                overrides.append(self.override())
            out = Overlay(base, tuple(overrides))
        elif word == "explicit":
            head = [] if self.peek(";") else self.numbers()
            self.expect(";")
            out = Explicit(tuple(head), self.spec())
        elif word == "shift":
            base = self.spec()
            self.expect(",")
            out = Shifted(base, self.integer())
        elif word == "telescope":
            out = Telescoped(self.spec())
        elif word == "affine":
            base = self.spec()
            self.expect(",")
            a = self.number()
            self.expect(",")
            out = Affine(base, a, self.number())
        else:
            left = self.spec()
            self.expect(",")
            out = Sum(left, self.spec())
        self.expect(")")
        return out

    def blocks(self) -> Blocks:
        self.expect("i")
        self.expect("=")
        if self.integer() != 1:
            self.i -= 1
            self.fail("block index must start at 1", ("1",))
        self.expect("..")
        self.expect(":")
        phases = [self.item()]
        while self.accept(","):
            phases.append(self.item())
        try:
            return Blocks(BlockSchedule(tuple(phases)))
        except ValueError as exc:
            self.fail(str(exc))

    def item(self) -> Phase:
        word = self.name()
        self.expect("(")
        if word in ("alt", "periodic"):
            pattern = self.numbers()
        elif word == "const":
            pattern = [self.number()]
        else:
            self.i -= 2
            self.fail("unknown phase pattern", ("alt", "const", "periodic"))
        self.expect(")")
        self.expect("*")
        if self.accept("("):
            length = self.length()
            self.expect(")")
        else:
            length = self.length()
        return Phase(tuple(pattern), length)

    def length(self) -> PhaseLength:
        first = self.integer()
        coef, base, const = 0, 1, first
        if self.accept("*"):
            base = self.integer()
            self.expect("^")
            self.expect("i")
            coef, const = first, 0
        elif self.accept("^"):
            self.expect("i")
            coef, base, const = 1, first, 0
        if self.accept("+"):
            const += self.integer()
        elif self.accept("-"):
            const -= self.integer()
        try:
            return PhaseLength(coef, base, const)
        except ValueError as exc:
            self.fail(str(exc))

    def override(self):
        s = self.set()
        self.expect("->")
        return s, self.rule()

    def rule(self):
        word = self.name()
        if word == "index":
            return IndexValue()
        if word == "const":
            self.expect("(")
            v = self.number()
            self.expect(")")
            return ConstantValue(v)
        if word == "parity":
            self.expect("(")
            a = self.number()
            self.expect(",")
            b = self.number()
            self.expect(")")
            return ParityValue(a, b)
        self.i -= 1
        self.fail("unknown override rule", ("const", "index", "parity"))

    # index sets
    def set(self) -> IndexSet:
        out = self.inter()
        while self.accept("|"):
            out = Union(out, self.inter())
        return out

    def inter(self) -> IndexSet:
        out = self.unary()
        while self.accept("&"):
            out = Intersection(out, self.unary())
        return out

    def unary(self) -> IndexSet:
        if self.accept("!"):
            return Complement(self.unary())
        if self.accept("("):
            out = self.set()
            self.expect(")")
            return out
        return self.atom()

    def atom(self) -> IndexSet:
        if self.tok[0] != "name":
            self.fail("expected an index set", tuple(sorted(_SET_WORDS)) + ("'!'", "'('"))
        word = self.name()
        if word == "squares":
            return PerfectSquares()
        if word == "evens":
            return Residues(2, frozenset({0}))
        if word == "odds":
            return Residues(2, frozenset({1}))
        if word == "all":
            return Residues(1, frozenset({0}))
        if word not in _SET_WORDS:
            self.i -= 1
            self.fail("unknown index set", tuple(sorted(_SET_WORDS)))
        self.expect("(")
        if word == "ap":
            first = self.integer()
            self.expect(",")
            out = self._build(ArithmeticProgression, first, self.integer())
        elif word == "residues":
            m = self.integer()
            self.expect(";")
            out = self._build(Residues, m, frozenset(self.ints(")")))
        elif word == "finite":
            out = self._build(Finite, tuple(self.ints(")")))
        elif word == "shift":
            inner = self.set()
            self.expect(",")
            out = shift_set(inner, self.integer())
        else:
            out = self.blockset()
        self.expect(")")
        return out

    def blockset(self) -> BlockUnion:
        spec = self.spec()
        if not isinstance(spec, Blocks):
            self.fail("blockset needs a blocks(...) spec")
        self.expect(",")
        phase = self.integer()
        offsets = mask = None
        while self.accept(","):
            word = self.name()
            self.expect("(")
            if word == "offsets":
                offsets = frozenset(self.ints(")"))
            elif word == "mask":
                m = self.integer()
                self.expect(";")
                mask = self._build(Mask, m, frozenset(self.ints(")")))
            else:
                self.i -= 2
                self.fail("unknown blockset option", ("offsets", "mask"))
            self.expect(")")
        return self._build(BlockUnion, spec.schedule, phase - 1, offsets, mask)

    def _build(self, cls, *args):
        try:
            return cls(*args)
        except ValueError as exc:
            self.fail(str(exc))

    def modification(self):
        s = self.set()
        self.expect("->")
        return s, self.rule()


def parse_sequence(text: str) -> SequenceSpec:
    p = _Parser(text)
    out = p.spec()
    p.done()
    return out


def parse_set(text: str) -> IndexSet:
    p = _Parser(text)
    out = p.set()
    p.done()
    return out


def parse_modification(text: str) -> tuple:
    """Parse ``set -> rule`` into an ``(IndexSet, rule)`` pair."""
    p = _Parser(text)
    out = p.modification()
    p.done()
    return out


def parse_spec(text: str):
    """Parse either a sequence spec or an index set, whichever the text is."""
    errors = []
    for fn in (parse_sequence, parse_set):
        try:
            return fn(text)
        except ParseError as exc:
            errors.append(exc)
    raise max(errors, key=lambda e: e.position)


# -- rendering ----------------------------------------------------------------

def _num(v: float) -> str:
    v = float(v)
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def _nums(vs) -> str:
    return ",".join(_num(v) for v in vs)


def _ints(vs) -> str:
    return ",".join(str(v) for v in sorted(vs))


def _length(length: PhaseLength) -> str:
    if length.coef == 0:
        return str(length.const)
    core = "%d^i" % length.base if length.coef == 1 else "%d*%d^i" % (length.coef, length.base)
    if length.const == 0:
        return core
    sign = "+" if length.const > 0 else "-"
    return "(%s%s%d)" % (core, sign, abs(length.const))


def _phase(ph: Phase) -> str:
    pat = "const(%s)" % _num(ph.pattern[0]) if len(ph.pattern) == 1 else "alt(%s)" % _nums(ph.pattern)
    return "%s*%s" % (pat, _length(ph.length))


def _rule(rule) -> str:
    if isinstance(rule, IndexValue):
        return "index"
    if isinstance(rule, ParityValue):
        return "parity(%s,%s)" % (_num(rule.value_if_odd), _num(rule.value_if_even))
    return "const(%s)" % _num(rule.value)


def _render_spec(spec: SequenceSpec) -> str:
    if isinstance(spec, Constant):
        return "const(%s)" % _num(spec.value)
    if isinstance(spec, Periodic):
        return "periodic(%s)" % _nums(spec.values)
    if isinstance(spec, Blocks):
        return "blocks(i=1..: %s)" % ", ".join(_phase(ph) for ph in spec.schedule.phases)
    if isinstance(spec, Overlay):
        ovs = ", ".join("%s -> %s" % (_render_set(s), _rule(r)) for s, r in spec.overrides)
        return "overlay(%s; %s)" % (_render_spec(spec.base), ovs)
    if isinstance(spec, Explicit):
        return "explicit(%s; %s)" % (_nums(spec.head), _render_spec(spec.tail))
    if isinstance(spec, Shifted):
        return "shift(%s, %d)" % (_render_spec(spec.base), spec.by)
    if isinstance(spec, Telescoped):
        return "telescope(%s)" % _render_spec(spec.base)
    if isinstance(spec, Affine):
        return "affine(%s, %s, %s)" % (_render_spec(spec.base), _num(spec.scale), _num(spec.offset))
    if isinstance(spec, Sum):
        return "sum(%s, %s)" % (_render_spec(spec.left), _render_spec(spec.right))
    raise TypeError("cannot render %r" % (spec,))


def _render_set(s: IndexSet, level: int = 0) -> str:
    # levels: 0 union operand, 1 intersection operand, 2 unary operand
    if isinstance(s, Union):
        text = "%s | %s" % (_render_set(s.left, 0), _render_set(s.right, 1))
        return text if level == 0 else "(%s)" % text
    if isinstance(s, Intersection):
        text = "%s & %s" % (_render_set(s.left, 1), _render_set(s.right, 2))
        return text if level <= 1 else "(%s)" % text
    if isinstance(s, Complement):
        return "!" + _render_set(s.inner, 2)
    if isinstance(s, PerfectSquares):
        return "squares" if s.offset == 0 else "shift(squares, %d)" % s.offset
    if isinstance(s, Residues):
        if s.modulus == 1 and s.residues:
            return "all"
        if s.modulus == 2 and s.residues == {0}:
            return "evens"
        if s.modulus == 2 and s.residues == {1}:
            return "odds"
        return "residues(%d; %s)" % (s.modulus, _ints(s.residues))
    if isinstance(s, ArithmeticProgression):
        return "ap(%d,%d)" % (s.first, s.step)
    if isinstance(s, Finite):
        return "finite(%s)" % _ints(s.members)
    if isinstance(s, BlockUnion):
        parts = [_render_spec(Blocks(s.schedule)), str(s.phase + 1)]
        if s.offsets is not None:
            parts.append("offsets(%s)" % _ints(s.offsets))
        if s.mask is not None:
            m = s.mask.shifted(-s.shift)
            parts.append("mask(%d; %s)" % (m.modulus, _ints(m.residues)))
        text = "blockset(%s)" % ", ".join(parts)
        return text if s.shift == 0 else "shift(%s, %d)" % (text, s.shift)
    raise TypeError("cannot render %r" % (s,))


def render(obj) -> str:
    """Text form of a spec, index set, rule or ``(set, rule)`` modification."""
    if isinstance(obj, SequenceSpec):
        return _render_spec(obj)
    if isinstance(obj, IndexSet):
        return _render_set(obj)
    if isinstance(obj, tuple) and len(obj) == 2:
        return "%s -> %s" % (_render_set(obj[0]), _rule(obj[1]))
    if hasattr(obj, "exceptions") and hasattr(obj, "rule"):
        return "%s -> %s" % (_render_set(obj.exceptions), _rule(obj.rule))
    return _rule(obj)
