"""GAS limits through witness modifications.

A witness changes a sequence on a set of density zero. Every Banach
statistical limit ignores such changes, so when the modified sequence is
statistically or almost convergent, its limit is the GAS limit of the original.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .almostconv import lorentz_test
from .density import exact_density
from .errors import DensityNotZero, UnboundedSpec
from .seqspec.sets import IndexSet, is_empty
from .seqspec.spec import Overlay, SequenceSpec
from .statconv import DEFAULT_EPS, stat_limit, usual_limit
from .verdict import ConvergenceVerdict, Status

LIMIT_TOL = 1e-6


@dataclass(frozen=True)
class Modification:
    """Replace the terms on ``exceptions`` by ``rule``; ``exceptions`` must have density 0."""

    exceptions: IndexSet
    rule: object

    def __post_init__(self):
        d = exact_density(self.exceptions)
        if d != 0:
            shown = "not derivable" if d is None else str(d)
            raise DensityNotZero("exception set density is %s, not 0" % shown)


def apply_modification(spec: SequenceSpec, m: Modification) -> SequenceSpec:
    if is_empty(m.exceptions):
        return spec
    override = (m.exceptions, m.rule)
    if isinstance(spec, Overlay):
        if spec.overrides and spec.overrides[-1] == override:
            return spec
        return Overlay(spec.base, spec.overrides + (override,))
    return Overlay(spec, (override,))


@dataclass(frozen=True)
class GasVerdict:
    status: Status
    limit: float | None = None
    witness: Modification | None = None
    via: str | None = None
    chain: tuple = field(default=(), compare=False)  # ((label, ConvergenceVerdict), ...)

    @property
    def converges(self) -> bool:
        return self.status is Status.CONVERGES

    @property
    def definite(self) -> bool:
        return self.status is Status.CONVERGES

    def summary(self) -> dict:
        return {"status": self.status.value, "limit": self.limit, "via": self.via}

    def __str__(self):
        if self.converges:
            return "Converges(%g)" % self.limit
        return self.status.value


def gas_limit(spec: SequenceSpec, witness: Modification | None = None, n_max: int | None = None,
              eps_grid=DEFAULT_EPS, k_schedule=None, statistical=None, almost=None) -> GasVerdict:
    """Semi-decide GAS convergence: statistical limit, then almost limit, then
    one witness modification followed by both tests again. Never refutes."""
    if spec.bound() is None:
        raise UnboundedSpec("GAS convergence is defined for bounded sequences")
    chain = []
    st = statistical or stat_limit(spec, n_max, eps_grid)
    chain.append(("statistical", st))
    if st.converges:
        return GasVerdict(Status.CONVERGES, st.limit, None, "statistical", tuple(chain))
    al = almost or lorentz_test(spec, k_schedule)
    chain.append(("almost", al))
    if al.converges:
        return GasVerdict(Status.CONVERGES, al.limit, None, "almost", tuple(chain))
    if witness is not None:
        modified = apply_modification(spec, witness)
        mst = stat_limit(modified, n_max, eps_grid)
        chain.append(("witness statistical", mst))
        if mst.converges:
            return GasVerdict(Status.CONVERGES, mst.limit, witness, "witness statistical", tuple(chain))
        mal = lorentz_test(modified, k_schedule)
        chain.append(("witness almost", mal))
        if mal.converges:
            return GasVerdict(Status.CONVERGES, mal.limit, witness, "witness almost", tuple(chain))
    return GasVerdict(Status.INCONCLUSIVE, None, witness, None, tuple(chain))


@dataclass(frozen=True)
class Classification:
    usual: ConvergenceVerdict
    statistical: ConvergenceVerdict
    almost: ConvergenceVerdict | None
    gas: GasVerdict | None

    def flags(self) -> dict:
        return {"usual": self.usual, "statistical": self.statistical,
                "almost": self.almost, "GAS": self.gas}

    def summary(self) -> dict:
        return {k: (None if v is None else v.summary()) for k, v in self.flags().items()}

    def consistency_errors(self) -> list:
        """Violations of usual => statistical => GAS, almost => GAS, and equal limits."""
        errs = []
        f = self.flags()
        implied = [("usual", "statistical"), ("usual", "almost"),
                   ("statistical", "GAS"), ("almost", "GAS")]
        for a, b in implied:
            if f[a] is not None and f[a].converges and f[b] is not None and not f[b].converges:
                errs.append("%s converges but %s does not" % (a, b))
        limits = [v.limit for v in f.values() if v is not None and v.converges]
        if limits and max(limits) - min(limits) > LIMIT_TOL:
            errs.append("converging flags disagree on the limit: %s" % limits)
        return errs


def classify(spec: SequenceSpec, witness: Modification | None = None, n_max: int | None = None,
             eps_grid=DEFAULT_EPS, k_schedule=None) -> Classification:
    """Run every test once. Almost and GAS flags are ``None`` for unbounded specs."""
    st = stat_limit(spec, n_max, eps_grid)
    bounded = spec.bound() is not None
    al = lorentz_test(spec, k_schedule) if bounded else None
    us = usual_limit(spec, st, al, n_max)
    gas = gas_limit(spec, witness, n_max, eps_grid, k_schedule, st, al) if bounded else None
    return Classification(us, st, al, gas)


__all__ = [
    "Classification", "GasVerdict", "Modification", "apply_modification", "classify", "gas_limit",
]
