"""Parameter sweeps: seed derivation, per-(value, seed) runs and the
central-region summary."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import numpy as np

from .config import RunConfig, SweepSpec
from .geometry import MeshGrid
from .scenario import (accumulate_error_grid, central_mean_error,
                       deployment_for_config, run_scenario, write_grid_csv)

# Config field driven by each sweep axis.
AXIS_FIELDS = {
    "blocker_radius": "blocker_radius_m",
    "blocker_speed": "blocker_speed_mps",
    "neighborhood_n": "num_cooperators",
}


def rep_seed(master_seed: int, rep: int, attempt: int = 0) -> int:
    """Deterministic per-repetition seed: SeedSequence([master, rep, attempt]).

    The seed depends on the repetition only, not the sweep value, so the
    runs for different values of one repetition share the deployment and
    motion (paired comparisons across the axis).
    """
    return int(np.random.SeedSequence([master_seed, rep, attempt]).generate_state(1)[0])


def draw_rep_seed(config: RunConfig, master_seed: int, rep: int,
                  required_ue: int, max_attempts: int = 200) -> int:
    """Per-repetition seed whose deployment has at least ``required_ue``
    non-typical UEs (needed when sweeping the neighborhood size)."""
    for attempt in range(max_attempts):
        seed = rep_seed(master_seed, rep, attempt)
        dep = deployment_for_config(config, seed)
        if dep.num_ue - 1 >= required_ue:
            return seed
    raise RuntimeError(
        f"no deployment with >= {required_ue} UEs found in {max_attempts} attempts "
        f"(ue_density={config.ue_density_per_m2}, radius={config.radius_m})")


def _config_for(config: RunConfig, axis: str, value, seed: int) -> RunConfig:
    field = AXIS_FIELDS[axis]
    if field == "num_cooperators":
        value = int(value)
    return replace(config, **{field: value, "seed": seed}).validate()


def _run_one(task):
    """One sweep point: run, aggregate, return summary numbers and grid rows."""
    config, axis, value, rep, seed = task
    cfg = _config_for(config, axis, value, seed)
    result = run_scenario(cfg)
    grid = MeshGrid.covering_disk(cfg.radius_m, cfg.grid_cell_m)
    eg = accumulate_error_grid(result.records, grid)
    return {
        "axis": axis,
        "value": value,
        "rep": rep,
        "seed": seed,
        "central_delta": central_mean_error(eg),
        "coverage_cells": eg.coverage_cells(),
        "error_grid": eg,
    }


def run_sweep(config: RunConfig, spec: SweepSpec, out_dir=None, workers: int = 1):
    """Execute a sweep: one run per (value, repetition).

    Repetition seeds derive from the config seed via a documented counter
    scheme and are shared across values; for neighborhood sweeps they are
    redrawn (deterministically) until the deployment supports the largest
    requested N.  Returns the list of per-run result dicts; when
    ``out_dir`` is given also writes one grid CSV per run plus summary.csv.
    """
    required = config.num_cooperators
    if spec.axis == "neighborhood_n":
        required = max(int(v) for v in spec.values)
    seeds = [draw_rep_seed(config, config.seed, rep, required)
             for rep in range(spec.repetitions)]

    tasks = [(config, spec.axis, value, rep, seeds[rep])
             for value in spec.values for rep in range(spec.repetitions)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, tasks))
    else:
        results = [_run_one(t) for t in tasks]

    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        for r in results:
            name = f"grid_{spec.axis}={r['value']:g}_seed={r['seed']}.csv"
            write_grid_csv(r["error_grid"], os.path.join(out_dir, name))
        write_summary_csv(results, spec, os.path.join(out_dir, "summary.csv"))
    return results


def summarize(results, spec: SweepSpec):
    """Per-value mean/std of the central-region error and mean coverage."""
    rows = []
    for value in spec.values:
        deltas = np.array([r["central_delta"] for r in results if r["value"] == value])
        cov = np.array([r["coverage_cells"] for r in results if r["value"] == value],
                       dtype=float)
        finite = deltas[np.isfinite(deltas)]
        rows.append({
            "axis": spec.axis,
            "value": value,
            "runs": len(deltas),
            "mean_central_delta_m": float(finite.mean()) if len(finite) else float("nan"),
            "std_central_delta_m": float(finite.std(ddof=1)) if len(finite) > 1 else 0.0,
            "mean_coverage_cells": float(cov.mean()) if len(cov) else float("nan"),
        })
    return rows


def write_summary_csv(results, spec: SweepSpec, path):
    rows = summarize(results, spec)
    with open(path, "w") as fh:
        fh.write("axis,value,runs,mean_central_delta_m,std_central_delta_m,"
                 "mean_coverage_cells\n")
        for r in rows:
            fh.write(f"{r['axis']},{r['value']:g},{r['runs']},"
                     f"{r['mean_central_delta_m']:.6f},{r['std_central_delta_m']:.6f},"
                     f"{r['mean_coverage_cells']:.2f}\n")
