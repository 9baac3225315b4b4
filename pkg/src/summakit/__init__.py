"""Natural density, statistical, almost and GAS convergence for structured
infinite sequences, decided from finite descriptions."""

__version__ = "0.1.0"

from .almostconv import WindowStats, exact_periodic_almost_limit, lorentz_test, window_mean
from .catalog import FIXTURE_NAMES, Fixture, check, fixture
from .density import DensityEstimate, empirical_density, exact_density
from .errors import (
    CountUnavailable, DensityNotZero, ParseError, SummakitError, SymbolicUnavailable,
    UnboundedSpec, UnknownFixture, WitnessUnavailable,
)
from .gasconv import Classification, GasVerdict, Modification, apply_modification, classify, gas_limit
from .seqspec import parse_modification, parse_sequence, parse_set, parse_spec, prefix_count, render
from .statconv import (
    density_one_subsequence, exceedance_set, recenter, stat_limit, telescope, usual_limit,
)
from .verdict import ConvergenceVerdict, Status

__all__ = [
    "FIXTURE_NAMES", "Classification", "ConvergenceVerdict", "CountUnavailable", "DensityEstimate",
    "DensityNotZero", "Fixture", "GasVerdict", "Modification", "ParseError", "Status",
    "SummakitError", "SymbolicUnavailable", "UnboundedSpec", "UnknownFixture", "WindowStats",
    "WitnessUnavailable", "apply_modification", "check", "classify", "density_one_subsequence",
    "empirical_density", "exact_density", "exact_periodic_almost_limit", "exceedance_set",
    "fixture", "gas_limit", "lorentz_test", "parse_modification", "parse_sequence", "parse_set",
    "parse_spec", "prefix_count", "recenter", "render", "stat_limit", "telescope", "usual_limit",
    "window_mean",
]
