"""Command-line entry points.

Four subcommands: `run` marches a preset or custom configuration,
`diff-line` measures a snapshot against the exact line wave, `fit-radial`
fits the collapse law to a diagnostics CSV, and `info` prints a snapshot
header.  Exit codes: 0 on success, 2 on configuration or input errors,
3 on solver failures.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from .analysis import (
    diff_line_wave,
    fit_radial_collapse,
    fit_speed,
    locate_crest,
)
from .dynamics import State
from .errors import (
    CavitationError,
    ConfigurationError,
    FitError,
    GmresError,
    ParameterError,
    SnapshotFormatError,
)
from .harness import load_config, run_experiment
from .snapshot import read_snapshot, write_snapshot

__all__ = ["main"]

_CONFIG_ERRORS = (
    ConfigurationError,
    ParameterError,
    SnapshotFormatError,
    FileNotFoundError,
    IsADirectoryError,
)
_SOLVER_ERRORS = (CavitationError, GmresError, FitError)


def _add_run_parser(subparsers) -> None:
    p = subparsers.add_parser("run", help="run an experiment")
    p.add_argument("--config", metavar="FILE", help="flat key = value file")
    p.add_argument("--preset", help="preset name (default: custom)")
    p.add_argument("--scale",
                   help="paper (default) or ci (grid / 4, dealias on)")
    for flag in ("nx", "ny", "nt", "cadence", "sign"):
        p.add_argument(f"--{flag}")
    for flag in ("lx", "ly", "tmax", "c", "eps", "alpha", "x0", "amp",
                 "g", "h-inf", "krasny"):
        p.add_argument(f"--{flag}")
    p.add_argument("--dealias", action="store_const", const="true")
    p.add_argument("--no-dealias", action="store_const", const="false",
                   dest="dealias")
    p.add_argument("--snap", metavar="T1,T2,...", help="snapshot times")
    p.add_argument("--out", metavar="DIR", help="output directory")
    p.set_defaults(func=_cmd_run)


def _cmd_run(args) -> int:
    overrides = {
        key: getattr(args, key.replace("-", "_"))
        for key in ("preset", "scale", "nx", "ny", "lx", "ly", "tmax", "nt",
                    "c", "eps", "alpha", "x0", "amp", "g", "h-inf", "sign",
                    "krasny", "dealias", "snap", "out", "cadence")
    }
    overrides["h_inf"] = overrides.pop("h-inf")
    cfg = load_config(args.config, overrides)
    summary = run_experiment(cfg)

    print(f"preset={cfg.preset} grid={cfg.Nx}x{cfg.Ny} dt={cfg.dt:g} "
          f"steps={summary.steps_completed}/{cfg.Nt}")
    print(f"drift mass={summary.mass_drift:.3e} px={summary.px_drift:.3e} "
          f"py={summary.py_drift:.3e} energy={summary.energy_drift:.3e}")
    print(f"min h={summary.min_h:.6g} max gmres iters/step={summary.max_gmres_iters}")
    for t, path in summary.snapshots:
        print(f"snapshot t={t:g} -> {path}")
    if cfg.out_dir:
        print(f"diagnostics -> {cfg.out_dir}/diagnostics.csv")
    if summary.error:
        print(f"aborted: {summary.error}", file=sys.stderr)
        return 3
    return 0


def _add_diff_parser(subparsers) -> None:
    p = subparsers.add_parser(
        "diff-line", help="difference between a snapshot and the exact line wave"
    )
    p.add_argument("snapshot", help="input snapshot file")
    p.add_argument("--c", type=float, help="wave speed (default: fit from the crest)")
    p.add_argument("--xs", type=float, help="crest position (default: locate)")
    p.add_argument("--out", metavar="FILE",
                   help="write the difference fields as a snapshot (h=dh, vx=dux)")
    p.set_defaults(func=_cmd_diff)


def _cmd_diff(args) -> int:
    state, params = read_snapshot(args.snapshot)
    crest = locate_crest(state.grid, state.h)
    x_s = args.xs if args.xs is not None else crest.x
    c = args.c if args.c is not None else fit_speed(
        crest.h_max, params.g, params.h_inf)

    dh, dux, (norm_h, norm_ux) = diff_line_wave(state, c, x_s, params)
    print(f"t={state.t:g} crest x={crest.x:.6g} h_max={crest.h_max:.6g}")
    print(f"c={c:.6g} x_s={x_s:.6g}")
    print(f"max|dh|={norm_h:.6e} max|dux|={norm_ux:.6e}")
    if args.out:
        diff_state = State(grid=state.grid, t=state.t, h=dh, vx=dux,
                           vy=np.zeros(state.grid.shape))
        write_snapshot(args.out, diff_state, params)
        print(f"difference fields -> {args.out}")
    return 0


def _add_fit_parser(subparsers) -> None:
    p = subparsers.add_parser(
        "fit-radial", help="fit the collapse law to a diagnostics CSV"
    )
    p.add_argument("csv", help="diagnostics CSV with t and hmin columns")
    p.add_argument("--tmin", type=float, default=3.75, help="fit-window start")
    p.add_argument("--out", metavar="FILE", help="write the fit as JSON")
    p.set_defaults(func=_cmd_fit)


def _read_series(path: str):
    t, hmin = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "t" not in reader.fieldnames \
                or "hmin" not in reader.fieldnames:
            raise ConfigurationError(f"{path}: expected columns 't' and 'hmin'")
        for row in reader:
            t.append(float(row["t"]))
            hmin.append(float(row["hmin"]))
    return np.asarray(t), np.asarray(hmin)


def _cmd_fit(args) -> int:
    series = _read_series(args.csv)
    fit = fit_radial_collapse(series, t_min=args.tmin)
    print(f"a={fit.a:.6g} b={fit.b:.6g} residual={fit.residual:.3e} "
          f"t_min={fit.t_min:g}")
    if args.out:
        record = {"a": fit.a, "b": fit.b, "residual": fit.residual,
                  "t_min": fit.t_min}
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(record, fh, indent=2)
            fh.write("\n")
        print(f"fit -> {args.out}")
    return 0


def _add_info_parser(subparsers) -> None:
    p = subparsers.add_parser("info", help="print a snapshot header and field ranges")
    p.add_argument("snapshot", help="input snapshot file")
    p.set_defaults(func=_cmd_info)


def _cmd_info(args) -> int:
    state, params = read_snapshot(args.snapshot)
    grid = state.grid
    print(f"grid {grid.Nx}x{grid.Ny}, periods 2*pi*({grid.Lx:g}, {grid.Ly:g})")
    print(f"t={state.t:.17g} g={params.g:g} h_inf={params.h_inf:g}")
    fields = [("h", state.h), ("vx", state.vx), ("vy", state.vy)]
    if state.sigma is not None:
        fields.append(("sigma", state.sigma))
    for name, f in fields:
        print(f"{name}: min={f.min():.6g} max={f.max():.6g}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="sgn2d",
        description="Pseudospectral solver for the 2D Serre-Green-Naghdi equations",
    )
    subparsers = parser.add_subparsers(required=True, metavar="COMMAND")
    _add_run_parser(subparsers)
    _add_diff_parser(subparsers)
    _add_fit_parser(subparsers)
    _add_info_parser(subparsers)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _SOLVER_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
