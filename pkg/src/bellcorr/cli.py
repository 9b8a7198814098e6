"""Command-line interface.

Exit codes: 0 success (or coincidence with a singlet), 2 usage or input
error, 3 domination witness found.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io as bio
from .chsh import interior_grid, maximize_chsh, scan
from .domination import DEFAULT_GRID, DEFAULT_TOLERANCE, find_domination_witness
from .errors import BellCorrError
from .models import HALF_PI
from .montecarlo import ExperimentConfig, run_experiment

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_WITNESS = 3


class UsageError(BellCorrError):
    pass


def _angles(values, degrees):
    out = []
    for item in values:
        for part in str(item).split(","):
            if part.strip():
                try:
                    out.append(float(part))
                except ValueError:
                    raise UsageError(f"not a number: {part!r}") from None
    arr = np.array(out, dtype=float)
    return np.radians(arr) if degrees else arr


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def cmd_eval(args):
    model = bio.parse_model_spec(args.model)
    thetas = _angles(args.theta, args.degrees)
    _emit(bio.evaluation_csv(thetas, np.atleast_1d(model(thetas))), args.out)
    return EXIT_OK


def cmd_scan(args):
    model = bio.parse_model_spec(args.model)
    if args.theta:
        thetas = _angles(args.theta, args.degrees)
    elif args.range:
        lo, hi = _angles(args.range, args.degrees)
        thetas = np.linspace(lo, hi, args.grid)
    else:
        thetas = interior_grid(args.grid)
    if len(thetas) < 2:
        raise UsageError("scan needs at least 2 grid points")
    if np.any(thetas <= 0) or np.any(thetas >= HALF_PI):
        raise UsageError("scan grid must lie strictly inside (0, pi/2)")
    _emit(bio.scan_csv(scan(model, args.family, thetas)), args.out)
    return EXIT_OK


def cmd_maximize(args):
    model = bio.parse_model_spec(args.model)
    axes, record = maximize_chsh(model, restrict_coplanar=not args.non_coplanar, budget=args.budget)
    _emit(bio.maximum_json(axes, record) + "\n", args.out)
    return EXIT_OK


def cmd_simulate(args):
    settings = {"model": None, "trials_per_bin": 10_000, "bin_count": 50, "axis_mode": "sphere", "seed": 0}
    if args.config:
        file_settings = bio.read_config(args.config)
        unknown = set(file_settings) - set(settings)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        settings.update(file_settings)
    for key in settings:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    if settings["model"] is None:
        raise UsageError("simulate needs --model or a config file with a model entry")
    try:
        config = ExperimentConfig(
            model=bio.parse_model_spec(str(settings["model"])),
            trials_per_bin=int(settings["trials_per_bin"]),
            bin_count=int(settings["bin_count"]),
            axis_mode=str(settings["axis_mode"]),
            seed=int(settings["seed"]),
        )
    except ValueError as exc:
        if isinstance(exc, BellCorrError):
            raise
        raise UsageError(str(exc)) from None
    _emit(bio.estimate_csv(run_experiment(config)), args.out)
    return EXIT_OK


def cmd_dominate(args):
    model = bio.parse_model_spec(args.model)
    verdict = find_domination_witness(model, tolerance=args.tolerance, grid_size=args.grid)
    _emit(verdict.to_json() + "\n", args.out)
    return EXIT_WITNESS if verdict.witness_found else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--model", help="singlet | flipped | pr:<linear|cosine|cubic> | lhv:<path> | table:<path>")
    shared.add_argument("--out", default="-", help="output path, '-' for stdout")
    shared.add_argument("--degrees", action="store_true", help="read angle inputs in degrees")

    parser = argparse.ArgumentParser(prog="bellcorr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[shared], help="evaluate C(theta)")
    p.add_argument("--theta", nargs="+", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("scan", parents=[shared], help="scan a CHSH family over (0, pi/2)")
    p.add_argument("--family", choices=["chsh1", "chsh2", "both"], default="both")
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--range", nargs=2, metavar=("LO", "HI"))
    p.add_argument("--theta", nargs="+")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("maximize", parents=[shared], help="maximise CHSH over axes")
    p.add_argument("--budget", type=int, default=100_000)
    p.add_argument("--non-coplanar", action="store_true")
    p.set_defaults(func=cmd_maximize)

    p = sub.add_parser("simulate", parents=[shared], help="Monte Carlo Bell experiment")
    p.add_argument("--config", help="key = value file (model, trials_per_bin, bin_count, axis_mode, seed)")
    p.add_argument("--trials", dest="trials_per_bin", type=int)
    p.add_argument("--bins", dest="bin_count", type=int)
    p.add_argument("--axis-mode", choices=["sphere", "coplanar"])
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("dominate", parents=[shared], help="search for a CHSH test the model under-violates")
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    p.add_argument("--grid", type=int, default=DEFAULT_GRID)
    p.set_defaults(func=cmd_dominate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command != "simulate" and args.model is None:
        print(f"bellcorr {args.command}: --model is required", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except BellCorrError as exc:
        print(f"bellcorr {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
