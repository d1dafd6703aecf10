"""Command-line pipeline: fit, tabulate, project, simulate, export curves.

Every subcommand renders its outputs in memory and only then writes them
(temporary file + rename), so a failing run leaves no partial files.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
import traceback
from pathlib import Path

import numpy as np

from . import __version__
from .abm import DiffusionParams, Seed, coupled_tfp_path, simulate_adoption
from .calibration import (
    TimeOrigin,
    catchup_params,
    dumps_fits,
    fit_all,
    fit_frontier,
    fit_to_dict,
    fits_document,
    load_fits_document,
    project,
)
from .dataio import emit_curve_samples, load_curve_document, parse_tfp_csv, projection_table, write_projection_table
from .errors import DomainError
from .lm import LmOptions

PROG = "herdgrowth"

_COMPONENTS = {
    "model": "model-core",
    "ode": "ode-integrator",
    "abm": "abm-sim",
    "lm": "calibration",
    "calibration": "calibration",
    "cee": "calibration",
    "dataio": "data-io",
    "cli": "cli",
}


class CliError(Exception):
    pass


def _component(exc: BaseException) -> str:
    name = "cli"
    for frame, _ in traceback.walk_tb(exc.__traceback__):
        mod = frame.f_globals.get("__name__", "")
        if mod.startswith("herdgrowth."):
            name = _COMPONENTS.get(mod.split(".")[1], name)
    return name


def _atomic_write(outputs: dict[Path, bytes]) -> None:
    staged = []
    try:
        for path, data in outputs.items():
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            staged.append((tmp, path))
        for tmp, path in staged:
            os.replace(tmp, path)
    finally:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.unlink(tmp)


def _read(path) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from exc


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _name_list(text: str) -> list[str]:
    return [v.strip() for v in text.split(",") if v.strip()]


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def parse_grid(text: str) -> np.ndarray:
    """``start:end:step`` inclusive of ``end`` when it lies on the grid."""
    try:
        start, end, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be start:end:step, got {text!r}") from None
    if not step > 0 or end < start:
        raise argparse.ArgumentTypeError("grid needs step > 0 and end >= start")
    count = math.floor((end - start) / step + 1e-9)
    return start + step * np.arange(count + 1)


def _lm_options(args) -> LmOptions:
    return LmOptions(
        initial_damping=args.lm_initial_damping,
        damping_factor=args.lm_damping_factor,
        max_iterations=args.lm_max_iterations,
        ssr_rtol=args.lm_ssr_rtol,
        gradient_tol=args.lm_gradient_tol,
        jacobian_rel_step=args.lm_jacobian_step,
    )


def _load_dataset(path):
    return parse_tfp_csv(_read(path))


def cmd_fit_frontier(args) -> dict[Path, bytes]:
    data = _load_dataset(args.input)
    if args.country not in data:
        raise DomainError(f"country {args.country!r} not in {args.input}")
    series = data[args.country]
    origin = TimeOrigin(args.t0) if args.t0 is not None else TimeOrigin.first_year_of(series)
    fit = fit_frontier(series, origin, _lm_options(args))
    return {Path(args.out): (json.dumps(fit_to_dict(fit), indent=2) + "\n").encode()}


def cmd_fit_all(args) -> dict[Path, bytes]:
    data = _load_dataset(args.input)
    countries = args.countries or [c for c in data if c != args.reference]
    origin = TimeOrigin(args.t0) if args.t0 is not None else None
    frontier_fit, fits = fit_all(data, args.reference, countries, origin, _lm_options(args))
    return {Path(args.out): dumps_fits(fits_document(frontier_fit, fits, args.reference)).encode()}


def cmd_table(args) -> dict[Path, bytes]:
    _, fits = load_fits_document(_read(args.fits).decode())
    table = projection_table(fits, args.years)
    return {Path(args.out): write_projection_table(table, args.format)}


def cmd_project(args) -> dict[Path, bytes]:
    _, fits = load_fits_document(_read(args.fits).decode())
    match = [f for f in fits if f.country == args.country]
    if not match:
        raise DomainError(f"no fit for country {args.country!r} in {args.fits}")
    fit = match[0]
    if fit.frontier is None or fit.t0_year is None:
        raise DomainError(f"fit for {args.country!r} lacks an embedded frontier or t0_year")
    rows = project(fit.frontier, catchup_params(fit), TimeOrigin(fit.t0_year), args.years)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["country", "year", "value"])
    for year, value in rows:
        w.writerow([args.country, year, repr(value)])
    return {Path(args.out): buf.getvalue().encode()}


def cmd_simulate(args) -> dict[Path, bytes]:
    p = DiffusionParams(args.sigma, args.h, args.n)
    master = Seed(args.seed)
    events, tfp = io.StringIO(), io.StringIO()
    we, wt = csv.writer(events, lineterminator="\n"), csv.writer(tfp, lineterminator="\n")
    we.writerow(["run", "time", "x_count"])
    wt.writerow(["run", "time", "tfp"])
    for run in range(args.runs):
        path = simulate_adoption(p, args.x0, args.t_max, master.for_run(run))
        for t, x in zip(path.times, path.states):
            we.writerow([run, repr(float(t)), int(x)])
        traj = coupled_tfp_path(path, args.gamma, args.a0)
        for t, a in zip(traj.times, traj.values):
            wt.writerow([run, repr(float(t)), repr(float(a))])
    out = Path(args.out)
    tfp_out = Path(args.tfp_out) if args.tfp_out else out.with_name(f"{out.stem}_tfp{out.suffix or '.csv'}")
    return {out: events.getvalue().encode(), tfp_out: tfp.getvalue().encode()}


def cmd_curves(args) -> dict[Path, bytes]:
    specs, origin = load_curve_document(_read(args.spec).decode())
    times = args.grid - origin.t0_year
    return {Path(args.out): emit_curve_samples(specs, times, origin)}


def _add_lm_flags(sp):
    d = LmOptions()
    g = sp.add_argument_group("Levenberg-Marquardt options")
    g.add_argument("--lm-initial-damping", type=float, default=d.initial_damping)
    g.add_argument("--lm-damping-factor", type=float, default=d.damping_factor)
    g.add_argument("--lm-max-iterations", type=int, default=d.max_iterations)
    g.add_argument("--lm-ssr-rtol", type=float, default=d.ssr_rtol)
    g.add_argument("--lm-gradient-tol", type=float, default=d.gradient_tol)
    g.add_argument("--lm-jacobian-step", type=float, default=d.jacobian_rel_step)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=PROG, description="Herding-based TFP catch-up models.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    sp = sub.add_parser("fit-frontier", help="fit the exponential frontier to one country")
    sp.add_argument("--input", required=True, help="country,year,value CSV")
    sp.add_argument("--country", required=True)
    sp.add_argument("--t0", type=int, help="calendar year mapped to t=0 (default: first year)")
    sp.add_argument("--out", required=True, help="FitResult JSON")
    _add_lm_flags(sp)
    sp.set_defaults(func=cmd_fit_frontier)

    sp = sub.add_parser("fit-all", help="fit the frontier, then every catching-up country")
    sp.add_argument("--input", required=True)
    sp.add_argument("--reference", required=True, help="frontier country")
    sp.add_argument("--countries", type=_name_list, help="comma list (default: all but reference)")
    sp.add_argument("--t0", type=int, help="default: first year of the reference series")
    sp.add_argument("--out", required=True)
    _add_lm_flags(sp)
    sp.set_defaults(func=cmd_fit_all)

    sp = sub.add_parser("table", help="projection table ordered by descending gamma")
    sp.add_argument("--fits", required=True)
    sp.add_argument("--years", type=_int_list, default=[2030, 2050])
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("project", help="project one country's TFP")
    sp.add_argument("--fits", required=True)
    sp.add_argument("--country", required=True)
    sp.add_argument("--years", type=_int_list, required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_project)

    sp = sub.add_parser("simulate", help="adoption ensemble and coupled TFP paths")
    sp.add_argument("--n", type=int, required=True, help="agent count")
    sp.add_argument("--sigma", type=float, required=True)
    sp.add_argument("--h", type=float, required=True)
    sp.add_argument("--gamma", type=float, required=True)
    sp.add_argument("--a0", type=float, required=True)
    sp.add_argument("--t-max", type=float, required=True)
    sp.add_argument("--runs", type=int, required=True)
    sp.add_argument("--seed", type=_u64, required=True)
    sp.add_argument("--x0", type=int, default=0, help="initial adopters (default 0)")
    sp.add_argument("--out", required=True, help="event CSV run,time,x_count")
    sp.add_argument("--tfp-out", help="TFP CSV run,time,tfp (default: <out>_tfp.csv)")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("curves", help="sample closed-form curves for plotting")
    sp.add_argument("--spec", required=True, help="curve spec JSON")
    sp.add_argument("--grid", type=parse_grid, required=True, help="start:end:step in calendar years")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_curves)
    return parser


def run(args: argparse.Namespace) -> int:
    try:
        if getattr(args, "runs", 1) < 1:
            raise DomainError("--runs must be at least 1")
        _atomic_write(args.func(args))
    except (CliError, ValueError, ArithmeticError, OSError, KeyError) as exc:
        print(f"{PROG} {args.command}: {_component(exc)}: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
