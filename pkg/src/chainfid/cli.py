"""Command-line front end: ``fid <command> [options]``.

Every command writes CSV (default) or JSON to stdout or ``--out``. Output is
byte-for-byte reproducible: floats use 17 significant digits, keys are
sorted, and the provenance header carries no timestamps.

Exit codes: 0 ok, 2 invalid input, 3 compute guard (e.g. oracle with N > 12),
4 I/O failure. Failures also print a one-line JSON error record to stderr.
"""

from __future__ import annotations

import argparse
import io
import json
import sys

import numpy as np

from . import __version__
from .closed_form import (
    ClosedFormVariant,
    fid_closed_finite,
    fid_infinite,
    fid_thermal_closed,
    second_moment,
)
from .fermion import fid_free_fermion, fid_thermal_free_fermion, mode_second_moment
from .fit import (
    DEFAULT_CYCLE_MULTIPLIER,
    ExperimentFormatError,
    PulseCycleSpec,
    fit_fid,
    map_time,
    read_records,
    synthetic_records,
    tau_groups,
)
from .model import ChainSpec, ComputeGuardError, ThermalSpec, TimeGrid, ValidationError, beta_from_physical
from .oracle import MAX_DENSE_SPINS, commutator_second_moment, fid_oracle, thermal_fid_oracle

EXIT_OK, EXIT_VALIDATION, EXIT_GUARD, EXIT_IO = 0, 2, 3, 4

VARIANTS = {
    "eq13": ClosedFormVariant.SERIES_EQ13,
    "eq15": ClosedFormVariant.FINITE_N_EQ15,
    "j0": ClosedFormVariant.INFINITE_J0_EQ16,
}


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if x == 0:
        return "0"  # folds -0.0
    return format(x, ".17g")


def _json_ready(obj):
    if isinstance(obj, dict):
        return {str(k): _json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        # round-trip through the 17-digit text form so JSON and CSV agree
        return float(fmt(obj))
    return obj


class Artifact:
    """A table of columns plus scalar summary values, renderable as CSV or JSON."""

    def __init__(self, command: str, config: dict):
        self.command = command
        self.config = config
        self.columns: dict[str, np.ndarray] = {}
        self.summary: dict = {}

    def render(self, kind: str) -> str:
        meta = {"command": self.command, "config": self.config, "version": __version__}
        if kind == "json":
            doc = {"meta": meta}
            if self.columns:
                doc["columns"] = {k: list(v) for k, v in self.columns.items()}
            doc.update(self.summary)
            return json.dumps(_json_ready(doc), sort_keys=True, indent=2) + "\n"
        buf = io.StringIO()
        buf.write(f"# command: {self.command}\n")
        buf.write(f"# config: {json.dumps(_json_ready(self.config), sort_keys=True)}\n")
        buf.write(f"# version: {__version__}\n")
        for key in sorted(self.summary):
            val = self.summary[key]
            text = fmt(val) if isinstance(val, (int, float, np.number, bool, np.bool_)) else json.dumps(_json_ready(val), sort_keys=True)
            buf.write(f"# {key}: {text}\n")
        if self.columns:
            names = list(self.columns)
            buf.write(",".join(names) + "\n")
            for row in zip(*self.columns.values()):
                buf.write(",".join(fmt(v) for v in row) + "\n")
        return buf.getvalue()


def _chain(args) -> ChainSpec:
    return ChainSpec(args.n_spins, args.coupling)


def _grid(args) -> TimeGrid:
    return TimeGrid.span(args.t_max, args.points)


def _thermal(args) -> ThermalSpec:
    if args.beta is not None:
        return ThermalSpec(args.beta)
    if args.larmor_frequency is None or args.temperature is None:
        raise ValidationError("beta", "give --beta or both --larmor-frequency and --temperature")
    return beta_from_physical(args.larmor_frequency, args.temperature)


def _series_artifact(name, args, series, normalized):
    if normalized:
        series = series.normalized()
    art = Artifact(name, _echo(args))
    art.columns["t"] = series.times
    art.columns["value"] = series.values
    art.summary["amplitude_at_zero"] = series.amplitude_at_zero
    art.summary["normalization"] = series.normalization
    return art


def cmd_analytic(args):
    chain, grid = _chain(args), _grid(args)
    variant = VARIANTS[args.variant]
    series = fid_closed_finite(chain, grid, variant)
    return _series_artifact("analytic", args, series, args.normalized)


def cmd_fermion(args):
    series = fid_free_fermion(_chain(args), _grid(args))
    return _series_artifact("fermion", args, series, args.normalized)


def _oracle_guard(chain, command):
    if chain.n_spins > MAX_DENSE_SPINS:
        raise ComputeGuardError(
            f"{command}: the dense oracle is limited to N <= {MAX_DENSE_SPINS} (got {chain.n_spins}); "
            "use 'fermion' for longer chains"
        )


def cmd_oracle(args):
    chain = _chain(args)
    _oracle_guard(chain, "oracle")
    series = fid_oracle(chain, _grid(args))
    return _series_artifact("oracle", args, series, args.normalized)


def cmd_thermal(args):
    chain, grid, thermal = _chain(args), _grid(args), _thermal(args)
    exact = fid_thermal_free_fermion(chain, thermal.beta, grid)
    closed = fid_thermal_closed(chain, thermal, grid)
    art = Artifact("thermal", _echo(args))
    art.columns["t"] = exact.times
    art.columns["fermion"] = exact.values
    art.columns["closed_j0"] = closed.values
    if chain.n_spins <= MAX_DENSE_SPINS and not args.no_oracle:
        art.columns["oracle"] = thermal_fid_oracle(chain, thermal, grid).values
    art.summary["beta"] = thermal.beta
    art.summary["amplitude_at_zero"] = exact.amplitude_at_zero
    return art


def cmd_compare(args):
    chain, grid = _chain(args), _grid(args)
    _oracle_guard(chain, "compare")
    oracle = fid_oracle(chain, grid).normalized()
    fermion = fid_free_fermion(chain, grid).normalized()
    eq15 = fid_closed_finite(chain, grid, ClosedFormVariant.FINITE_N_EQ15).normalized()
    j0 = fid_infinite(chain, grid)
    art = Artifact("compare", _echo(args))
    art.columns["t"] = grid.times
    art.columns["oracle"] = oracle.values
    art.columns["fermion"] = fermion.values
    art.columns["closed_eq15"] = eq15.values
    art.columns["j0"] = j0.values
    art.summary["max_abs_oracle_minus_fermion"] = float(np.max(np.abs(oracle.values - fermion.values)))
    art.summary["max_abs_fermion_minus_eq15"] = float(np.max(np.abs(fermion.values - eq15.values)))
    art.summary["max_abs_fermion_minus_j0"] = float(np.max(np.abs(fermion.values - j0.values)))
    return art


def cmd_moments(args):
    chain = _chain(args)
    m2 = second_moment(chain)
    art = Artifact("moments", _echo(args))
    art.summary["m2_limit"] = m2.limit
    art.summary["m2_finite_n"] = m2.finite_n
    art.summary["m2_finite_n_label"] = "derived, oracle-checked"
    art.summary["m2_modes"] = mode_second_moment(chain)
    if chain.n_spins <= MAX_DENSE_SPINS:
        art.summary["m2_commutator"] = commutator_second_moment(chain)
    return art


def cmd_fit(args):
    spec = PulseCycleSpec(cycle_duration_in_tau=args.cycle_multiplier)
    if args.synthetic_d is not None:
        records = synthetic_records(args.synthetic_d, noise=args.noise, seed=args.seed, cycle_spec=spec)
    elif args.data is None:
        raise ValidationError("data", "give a CSV path or --synthetic-d")
    else:
        records = read_records(args.data)
    result = fit_fid(map_time(records, spec), (args.d_min, args.d_max))
    art = Artifact("fit", _echo(args))
    art.summary.update(result.to_json())
    art.summary["cycle_multiplier"] = spec.cycle_duration_in_tau
    art.summary["tau_groups_us"] = [f"{tau * 1e6:.6g}" for tau in tau_groups(records)]
    return art


def _echo(args) -> dict:
    skip = {"func", "out", "output"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _add_chain(p):
    p.add_argument("--n-spins", type=int, required=True)
    p.add_argument("--coupling", type=float, required=True, help="D in rad/s")


def _add_grid(p):
    p.add_argument("--t-max", type=float, required=True, help="seconds")
    p.add_argument("--points", type=int, default=201)


def _add_output(p):
    p.add_argument("--output", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default="-", help="output path, '-' for stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fid", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analytic", help="closed-form FID (eq13 series, eq15 finite N, j0 limit)")
    _add_chain(p)
    _add_grid(p)
    p.add_argument("--variant", choices=sorted(VARIANTS), default="j0")
    p.add_argument("--normalized", action="store_true")
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("fermion", help="exact finite-N FID from the mode sum")
    _add_chain(p)
    _add_grid(p)
    p.add_argument("--normalized", action="store_true")
    p.set_defaults(func=cmd_fermion)

    p = sub.add_parser("oracle", help="dense 2^N evolution (N <= 12)")
    _add_chain(p)
    _add_grid(p)
    p.add_argument("--normalized", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("thermal", help="FID from the equilibrium state exp(beta I_z)/Z")
    _add_chain(p)
    _add_grid(p)
    p.add_argument("--beta", type=float)
    p.add_argument("--larmor-frequency", type=float, help="rad/s")
    p.add_argument("--temperature", type=float, help="K")
    p.add_argument("--no-oracle", action="store_true")
    p.set_defaults(func=cmd_thermal)

    p = sub.add_parser("compare", help="all engines side by side, normalized (N <= 12)")
    _add_chain(p)
    _add_grid(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("moments", help="second moment by every route")
    _add_chain(p)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("fit", help="fit D to tau_us,cycles,intensity CSV data")
    p.add_argument("data", nargs="?")
    p.add_argument("--cycle-multiplier", type=float, default=DEFAULT_CYCLE_MULTIPLIER,
                   help="sequence period in units of tau (default 12)")
    p.add_argument("--d-min", type=float, default=1e3)
    p.add_argument("--d-max", type=float, default=1e5)
    p.add_argument("--synthetic-d", type=float, help="fit generated data with this D instead of a file")
    p.add_argument("--noise", type=float, default=0.0, help="relative Gaussian noise for --synthetic-d")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_fit)

    for p in sub.choices.values():
        _add_output(p)
    return parser


def _fail(code: int, kind: str, message: str, field: str | None = None) -> int:
    record = {"error": kind, "message": message}
    if field is not None:
        record["field"] = field
    sys.stderr.write(json.dumps(record, sort_keys=True) + "\n")
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        artifact = args.func(args)
        text = artifact.render(args.output)
    except ValidationError as exc:
        return _fail(EXIT_VALIDATION, "validation", str(exc), exc.field)
    except ExperimentFormatError as exc:
        return _fail(EXIT_VALIDATION, "format", str(exc), f"line {exc.line}")
    except ComputeGuardError as exc:
        return _fail(EXIT_GUARD, "compute_guard", str(exc))
    except OSError as exc:
        return _fail(EXIT_IO, "io", str(exc))
    try:
        if args.out == "-":
            sys.stdout.write(text)
        else:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
    except OSError as exc:
        return _fail(EXIT_IO, "io", str(exc))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
