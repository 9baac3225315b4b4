"""Command-line front end: ``summakit <command> <expr> [options]``.

Exit codes: 0 for a definite verdict, 2 for Inconclusive, 1 for errors,
rejected witnesses and failed fixture checks.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
import time

from . import __version__
from .almostconv import lorentz_test
from .catalog import FIXTURE_NAMES, check, fixture
from .density import empirical_density
from .errors import DensityNotZero, SummakitError
from .gasconv import Modification, classify, gas_limit
from .generators import random_stat_convergent
from .seqspec.dsl import parse_modification, parse_sequence, parse_set, render
from .statconv import DEFAULT_EPS, stat_limit
from .verdict import Status

SCHEMA = "summakit.report/1"
EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, "%s: error: %s\n" % (self.prog, message))


def _floats(text: str) -> list:
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text: str) -> list:
    return [int(float(x)) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n-max", type=lambda s: int(float(s)), default=None,
                        help="prefix length to examine (default depends on the input)")
    common.add_argument("--eps", type=_floats, default=None,
                        help="comma-separated exceedance levels, e.g. 0.5,0.1,0.01")
    common.add_argument("--k-schedule", type=_ints, default=None,
                        help="comma-separated window lengths for the window-mean test")
    common.add_argument("--grid", type=float, default=2.0, help="growth factor of the count grid")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=None,
                        help="seed for randomized fixtures (fixture random)")

    p = _Parser(prog="summakit", description="Density and summability tests for structured sequences.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("density", parents=[common], help="natural density of an index set").add_argument("expr")
    sub.add_parser("stat", parents=[common], help="statistical convergence").add_argument("expr")
    sub.add_parser("almost", parents=[common], help="almost convergence").add_argument("expr")
    for name, text in (("gas", "GAS limit"), ("classify", "all four convergence flags")):
        sp = sub.add_parser(name, parents=[common], help=text)
        sp.add_argument("expr")
        sp.add_argument("--witness", default=None, help="modification, e.g. 'squares -> parity(1,0)'")
    fp = sub.add_parser("fixture", parents=[common], help="show or check a catalog fixture")
    fp.add_argument("name", help="one of %s, or 'random'" % ", ".join(FIXTURE_NAMES))
    fp.add_argument("--check", action="store_true")
    return p


# -- report assembly ----------------------------------------------------------

def _split_trajectories(diag: dict, label: str, traj: dict) -> dict:
    out = dict(diag)
    for key, rows in out.pop("trajectories", {}).items():
        traj["%s %s" % (label, key)] = rows
    return out


def _verdict_json(v, label: str, traj: dict) -> dict | None:
    if v is None:
        return None
    d = v.summary()
    d["diagnostics"] = _split_trajectories(v.diagnostics, label, traj)
    return d


def _gas_json(g, traj: dict) -> dict | None:
    if g is None:
        return None
    d = g.summary()
    d["witness"] = None if g.witness is None else render(g.witness)
    d["chain"] = [{"step": label, **_verdict_json(v, "gas " + label, traj)} for label, v in g.chain]
    return d


def _witness(text: str | None) -> Modification | None:
    if text is None:
        return None
    return Modification(*parse_modification(text))


def _definite_exit(status: Status) -> int:
    if status is Status.INCONCLUSIVE:
        return EXIT_INCONCLUSIVE
    if status is Status.WITNESS_REJECTED:
        return EXIT_ERROR
    return EXIT_OK


def _classify_exit(flags: dict) -> int:
    statuses = [v.status for v in flags.values() if v is not None]
    if Status.CONVERGES in statuses or Status.INCONCLUSIVE not in statuses:
        return EXIT_OK
    return EXIT_INCONCLUSIVE


def _run_density(args, traj) -> tuple:
    s = parse_set(args.expr)
    est = empirical_density(s, args.n_max or 10 ** 6, args.grid)
    traj["density"] = [[int(n), float(v)] for n, v in est.trajectory]
    verdict = {
        "exact": None if est.exact is None else str(est.exact),
        "last": est.last,
        "residual": est.residual,
        "tolerance": est.tolerance,
        "converged": est.converged,
    }
    return render(s), {"density": verdict}, EXIT_OK


def _run_stat(args, traj) -> tuple:
    spec = parse_sequence(args.expr)
    v = stat_limit(spec, args.n_max, args.eps or DEFAULT_EPS, grid=args.grid)
    return render(spec), {"statistical": _verdict_json(v, "statistical", traj)}, _definite_exit(v.status)


def _run_almost(args, traj) -> tuple:
    spec = parse_sequence(args.expr)
    v = lorentz_test(spec, args.k_schedule)
    return render(spec), {"almost": _verdict_json(v, "almost", traj)}, _definite_exit(v.status)


def _run_gas(args, traj) -> tuple:
    spec = parse_sequence(args.expr)
    try:
        w = _witness(args.witness)
    except DensityNotZero as exc:
        return render(spec), {"GAS": {"status": Status.WITNESS_REJECTED.value, "limit": None,
                                      "reason": str(exc)}}, EXIT_ERROR
    g = gas_limit(spec, w, args.n_max, args.eps or DEFAULT_EPS, args.k_schedule)
    return render(spec), {"GAS": _gas_json(g, traj)}, _definite_exit(g.status)


def _classification_json(c, traj) -> dict:
    return {
        "usual": _verdict_json(c.usual, "usual", traj),
        "statistical": _verdict_json(c.statistical, "statistical", traj),
        "almost": _verdict_json(c.almost, "almost", traj),
        "GAS": _gas_json(c.gas, traj),
        "consistency_errors": c.consistency_errors(),
    }


def _run_classify(args, traj) -> tuple:
    spec = parse_sequence(args.expr)
    try:
        w = _witness(args.witness)
    except DensityNotZero as exc:
        return render(spec), {"GAS": {"status": Status.WITNESS_REJECTED.value, "limit": None,
                                      "reason": str(exc)}}, EXIT_ERROR
    c = classify(spec, w, args.n_max, args.eps or DEFAULT_EPS, args.k_schedule)
    return render(spec), _classification_json(c, traj), _classify_exit(c.flags())


def _run_random_fixture(args, traj) -> tuple:
    seed = 0 if args.seed is None else args.seed
    spec, ell = random_stat_convergent(random.Random(seed))
    verdicts = {"seed": seed, "expected": {"statistical": {"status": "Converges", "limit": ell}}}
    code = EXIT_OK
    if args.check:
        v = stat_limit(spec, args.n_max or 1 << 17, args.eps or DEFAULT_EPS, grid=args.grid)
        ok = v.converges and abs(v.limit - ell) <= 1e-6
        verdicts["statistical"] = _verdict_json(v, "statistical", traj)
        verdicts["check"] = {"ok": ok, "mismatches": [] if ok else [["statistical", str(ell), str(v)]]}
        code = EXIT_OK if ok else EXIT_ERROR
    return render(spec), verdicts, code


def _run_fixture(args, traj) -> tuple:
    if args.name == "random":
        return _run_random_fixture(args, traj)
    fx = fixture(args.name)
    verdicts = {
        "name": fx.name,
        "provenance": fx.provenance,
        "witness": fx.witness_source,
        "expected": {k: {"status": e.status.value, "limit": e.limit} for k, e in fx.expected.items()},
    }
    code = EXIT_OK
    if args.check:
        r = check(fx, args.n_max)
        verdicts.update(_classification_json(r.classification, traj))
        verdicts["check"] = {"ok": r.ok, "mismatches": [list(m) for m in r.mismatches]}
        code = EXIT_OK if r.ok else EXIT_ERROR
    return fx.source, verdicts, code


_COMMANDS = {
    "density": _run_density, "stat": _run_stat, "almost": _run_almost,
    "gas": _run_gas, "classify": _run_classify, "fixture": _run_fixture,
}


def _parameters(args) -> dict:
    keys = ("n_max", "eps", "k_schedule", "grid", "seed", "witness", "check")
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def _emit_csv(traj: dict, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["series", "n", "value"])
    for series in sorted(traj):
        for n, v in traj[series]:
            w.writerow([series, n, repr(float(v))])


def run(argv=None, out=None) -> int:
    """Run one command; the report goes to ``out`` (stdout by default)."""
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    traj: dict = {}
    started = time.perf_counter()
    try:
        text, verdicts, code = _COMMANDS[args.command](args, traj)
    except SummakitError as exc:
        print("summakit: %s: %s" % (type(exc).__name__, exc), file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print("summakit: invalid input: %s" % exc, file=sys.stderr)
        return EXIT_ERROR
    if args.format == "csv":
        _emit_csv(traj, out)
        return code
    report = {
        "schema": SCHEMA,
        "command": args.command,
        "input": text,
        "parameters": _parameters(args),
        "verdicts": verdicts,
        "trajectories": traj,
        "exit_code": code,
        "runtime": {"seconds": round(time.perf_counter() - started, 3), "version": __version__},
    }
    out.write(json.dumps(report, sort_keys=True, indent=2, default=str) + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
