"""Exception types raised across summakit."""


class SummakitError(Exception):
    """Base class for all library errors."""


class CountUnavailable(SummakitError):
    """A prefix count has no closed form and exceeds the enumeration budget."""


class SymbolicUnavailable(SummakitError):
    """An exceedance set cannot be expressed in the index-set algebra."""


class WitnessUnavailable(SummakitError):
    """A density-one subsequence cannot be built symbolically."""


class UnboundedSpec(SummakitError):
    """The sequence has no finite sup-norm bound."""


class DensityNotZero(SummakitError):
    """A modification's exception set does not have derivable density 0."""


class UnknownFixture(SummakitError, KeyError):
    pass


class ParseError(SummakitError):
    """DSL syntax error with the offending position and what was expected."""

    def __init__(self, message, position, expected=()):
        self.position = position
        self.expected = tuple(expected)
        detail = message
        if self.expected:
            detail += " (expected %s)" % " or ".join(self.expected)
        super().__init__("at position %d: %s" % (position, detail))
