"""Command line front end: single runs, parameter sweeps, standalone
bearing fusion and the oracle validation suites."""

from __future__ import annotations

import argparse
import math
import os
import sys

from . import __version__
from .config import (ConfigError, RunConfig, SweepSpec, parse_config,
                     serialize_config, with_overrides)
from .geometry import MeshGrid
from .localization import fuse_bearings, read_bearing_file
from .scenario import (accumulate_error_grid, run_scenario,
                       write_grid_csv, write_trajectory_csv)
from .detection import write_detection_trace
from .sweep import run_sweep

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _load_config(args) -> RunConfig:
    config = parse_config(args.config) if args.config else RunConfig()
    return with_overrides(config,
                          seed=getattr(args, "seed", None),
                          estimator_mode=getattr(args, "mode", None))


def _write_manifest(out_dir, config: RunConfig, command: str):
    path = os.path.join(out_dir, "manifest.txt")
    with open(path, "w") as fh:
        fh.write(f"# sidesense {__version__} run manifest ({command})\n")
        fh.write(serialize_config(config))


def _prepare_out_dir(path):
    try:
        os.makedirs(path, exist_ok=True)
        probe = os.path.join(path, ".write_probe")
        with open(probe, "w") as fh:
            fh.write("")
        os.remove(probe)
    except OSError as exc:
        raise RuntimeError(f"output directory {path!r} not writable: {exc}") from None


def cmd_simulate(args) -> int:
    config = _load_config(args)
    out_dir = args.out
    _prepare_out_dir(out_dir)
    result = run_scenario(config)
    for w in result.warnings:
        print(f"warning: {w}", file=sys.stderr)
    write_trajectory_csv(result.records, os.path.join(out_dir, "trajectory.csv"))
    if result.records:
        grid = MeshGrid.covering_disk(config.radius_m, config.grid_cell_m)
        eg = accumulate_error_grid(result.records, grid)
        write_grid_csv(eg, os.path.join(out_dir, "grid.csv"))
    if config.detection_trace:
        write_detection_trace(os.path.join(out_dir, "detections.csv"), result.detections)
    _write_manifest(out_dir, config, "simulate")
    fresh = [r for r in result.records if r.fresh]
    mean_err = (sum(r.error for r in fresh) / len(fresh)) if fresh else math.nan
    print(f"simulate: {len(result.records)} records, {len(fresh)} fresh estimates, "
          f"mean error {mean_err:.3f} m -> {out_dir}")
    return EXIT_OK


def _parse_values(raw: str, axis: str):
    try:
        vals = tuple(float(v) for v in raw.replace(",", " ").split())
    except ValueError:
        raise ConfigError(f"--values: expected numbers, got {raw!r}") from None
    if axis == "neighborhood_n":
        for v in vals:
            if v != int(v):
                raise ConfigError(f"--values: neighborhood sizes must be integers, got {v}")
    return vals


def cmd_sweep(args) -> int:
    config = _load_config(args)
    spec = SweepSpec(axis=args.axis, values=_parse_values(args.values, args.axis),
                     repetitions=args.reps)
    _prepare_out_dir(args.out)
    results = run_sweep(config, spec, out_dir=args.out, workers=args.workers)
    _write_manifest(args.out, config, f"sweep {spec.axis}={list(spec.values)} "
                                      f"reps={spec.repetitions}")
    print(f"sweep: {len(results)} runs -> {args.out}/summary.csv")
    return EXIT_OK


def cmd_localize(args) -> int:
    bearings = read_bearing_file(args.bearing_file)
    x, y = fuse_bearings(bearings)
    print(f"{x:.4f} {y:.4f}")
    return EXIT_OK


def cmd_validate(args) -> int:
    from .validate import run_suites
    results = run_suites(full=args.full)
    all_ok = True
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        all_ok &= ok
    return EXIT_OK if all_ok else EXIT_RUNTIME


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sidesense",
        description="Cooperative side-lobe sensing simulator and blocker localizer")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one scenario and emit CSVs")
    sim.add_argument("--config", help="flat key-value config file")
    sim.add_argument("--seed", type=int, help="override the config seed")
    sim.add_argument("--mode", choices=("svd", "oracle"), help="bearing estimator")
    sim.add_argument("--out", default="sidesense_out", help="output directory")
    sim.set_defaults(fn=cmd_simulate)

    swp = sub.add_parser("sweep", help="sweep one parameter over seeds")
    swp.add_argument("--config", help="flat key-value config file")
    swp.add_argument("--axis", required=True,
                     choices=("blocker_radius", "blocker_speed", "neighborhood_n"))
    swp.add_argument("--values", required=True, help="comma-separated sweep values")
    swp.add_argument("--reps", type=int, default=10, help="repetitions per value")
    swp.add_argument("--seed", type=int, help="override the master seed")
    swp.add_argument("--mode", choices=("svd", "oracle"), help="bearing estimator")
    swp.add_argument("--workers", type=int, default=1, help="parallel sweep workers")
    swp.add_argument("--out", default="sidesense_sweep", help="output directory")
    swp.set_defaults(fn=cmd_sweep)

    loc = sub.add_parser("localize", help="fuse a file of bearing quadruplets")
    loc.add_argument("bearing_file", help="lines of: x y theta_deg alpha_deg")
    loc.set_defaults(fn=cmd_localize)

    val = sub.add_parser("validate", help="run the numerical oracle suites")
    val.add_argument("--full", action="store_true", help="acceptance-scale sizes")
    val.set_defaults(fn=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        # malformed inputs (e.g. bearing files) are configuration-class errors
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
