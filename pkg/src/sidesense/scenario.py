"""Timed simulation loop binding motion, sensing, detection and fusion,
and mesh-grid aggregation of the localization error."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import RunConfig
from .deployment import NetworkDeployment, build_deployment, select_cooperators
from .detection import bearing_from_sector, estimate_active_sector, oracle_bearing
from .geometry import MeshGrid
from .localization import fuse_bearings
from .sensing import SensingEngine, SensingMatrix


@dataclass(frozen=True)
class StepRecord:
    """One post-warm-up simulation step: truth, estimate and bookkeeping.

    ``est`` is None only when no bearing was ever available up to this
    step; a step with no fresh bearings repeats the previous estimate and
    carries the 'carried' flag.
    """

    t: float
    true_pos: tuple
    est: tuple | None
    bearing_count: int
    flags: tuple = ()

    @property
    def fresh(self) -> bool:
        return self.est is not None and not self.flags

    @property
    def error(self) -> float | None:
        if self.est is None:
            return None
        return math.hypot(self.est[0] - self.true_pos[0], self.est[1] - self.true_pos[1])


@dataclass
class ScenarioResult:
    records: list
    detections: list
    deployment: NetworkDeployment
    cooperators: np.ndarray
    warnings: tuple = ()


def deployment_for_config(config: RunConfig, seed: int | None = None) -> NetworkDeployment:
    """Deployment drawn from the run's dedicated RNG stream."""
    seed = config.seed if seed is None else seed
    dep_ss = np.random.SeedSequence(seed).spawn(3)[0]
    return build_deployment(config.deployment_params(seed), rng=np.random.default_rng(dep_ss))


def run_scenario(config: RunConfig) -> ScenarioResult:
    """Run one scenario: warm-up of tau steps fills the sensing windows,
    then every step advances the blocker, recomputes all cooperators'
    rows, detects, fuses the detected bearings and records the step.

    RNG streams (deployment, motion, fading) are spawned from the config
    seed, so a seed fixes the entire run bit-for-bit.
    """
    config.validate()
    _, motion_ss, fade_ss = np.random.SeedSequence(config.seed).spawn(3)
    dep = deployment_for_config(config)
    coop = select_cooperators(dep, config.num_cooperators, config.include_typical_ue)
    layout = config.layout()
    radio = config.radio_params()
    motion_rng = np.random.default_rng(motion_ss)
    fade_rng = np.random.default_rng(fade_ss) if config.fading else None
    motion = config.motion()
    state = motion.initial_state(config.blocker_radius_m, motion_rng)

    tau = config.window_tau_s
    dt = config.time_step_s
    duration = config.resolved_duration()
    svd_mode = config.estimator_mode == "svd"
    if svd_mode:
        engine = SensingEngine(dep, radio, layout, coop,
                               scheduling=config.scheduling)
        matrices = [SensingMatrix(tau + 1, layout.sector_count, owner_ue=int(u))
                    for u in coop]

    records = []
    detections = []
    prev_est = None
    for step in range(duration):
        t = step * dt
        if step > 0:
            state = motion.step(state, dt, motion_rng)
        bearings = []
        if svd_mode:
            rows = engine.rows(step, blocker=state, rng=fade_rng)
            for i, ue in enumerate(coop):
                matrices[i].push(rows[i], t)
            if matrices[0].full:
                for i, ue in enumerate(coop):
                    res = estimate_active_sector(matrices[i], config.detection_threshold,
                                                 config.detection_min_rms_db,
                                                 config.detection_recency)
                    detections.append((t, int(ue), res.active_sector,
                                       res.confidence, res.detected))
                    if res.detected:
                        bearings.append(bearing_from_sector(int(ue), dep, res, layout))
        elif step >= tau:
            for ue in coop:
                try:
                    bearings.append(oracle_bearing(int(ue), dep, state, layout))
                except ValueError:
                    pass  # blocker sitting on the UE: no bearing from it

        if step < tau:
            continue
        flags = ()
        if bearings:
            est = tuple(fuse_bearings(bearings))
            prev_est = est
        elif prev_est is not None:
            est = prev_est
            flags = ("carried",)
        else:
            est = None
            flags = ("no_estimate",)
        records.append(StepRecord(t=t, true_pos=(float(state.pos[0]), float(state.pos[1])),
                                  est=est, bearing_count=len(bearings), flags=flags))

    warnings = ()
    if duration <= tau:
        warnings = (f"duration {duration} steps does not exceed the {tau}-step warm-up; "
                    f"no records produced",)
    return ScenarioResult(records=records, detections=detections, deployment=dep,
                          cooperators=coop, warnings=warnings)


@dataclass
class ErrorGrid:
    """Per-cell error sums over a mesh grid, binned by the true position.

    Steps with a fresh estimate add their Euclidean error; carried-forward
    or absent estimates count as visits (and flagged steps) only, so stale
    estimates never pollute the per-cell mean.
    """

    grid: MeshGrid
    sum_error: np.ndarray = None
    error_count: np.ndarray = None
    visit_count: np.ndarray = None
    flagged_count: np.ndarray = None

    def __post_init__(self):
        shape = (self.grid.width_cells, self.grid.height_cells)
        if self.sum_error is None:
            self.sum_error = np.zeros(shape)
            self.error_count = np.zeros(shape, dtype=int)
            self.visit_count = np.zeros(shape, dtype=int)
            self.flagged_count = np.zeros(shape, dtype=int)

    def add(self, record: StepRecord):
        cell = self.grid.cell_index(record.true_pos)
        if cell is None:
            return
        self.visit_count[cell] += 1
        if record.fresh:
            self.sum_error[cell] += record.error
            self.error_count[cell] += 1
        else:
            self.flagged_count[cell] += 1

    def mean_error(self) -> np.ndarray:
        """Per-cell mean error; NaN where no fresh estimate was recorded."""
        with np.errstate(invalid="ignore"):
            return np.where(self.error_count > 0,
                            self.sum_error / np.maximum(self.error_count, 1),
                            np.nan)

    def coverage_cells(self) -> int:
        """Number of cells holding at least one fresh-estimate error."""
        return int((self.error_count > 0).sum())


def accumulate_error_grid(records, grid: MeshGrid) -> ErrorGrid:
    """Fold step records into a fresh ErrorGrid."""
    if not records:
        raise ValueError("no records to accumulate")
    eg = ErrorGrid(grid=grid)
    for rec in records:
        eg.add(rec)
    return eg


def central_mean_error(eg: ErrorGrid, radius: float = 15.0, center=(0.0, 0.0)) -> float:
    """Unweighted mean of per-cell mean errors for cells whose center lies
    within ``radius`` of ``center``; NaN when no such cell has data."""
    vals = []
    for i in range(eg.grid.width_cells):
        for j in range(eg.grid.height_cells):
            if eg.error_count[i, j] == 0:
                continue
            c = eg.grid.cell_center(i, j)
            if math.hypot(c[0] - center[0], c[1] - center[1]) <= radius:
                vals.append(eg.sum_error[i, j] / eg.error_count[i, j])
    return float(np.mean(vals)) if vals else float("nan")


def write_trajectory_csv(records, path):
    """trajectory.csv: t, truth, estimate, error, bearing count and flags."""
    with open(path, "w") as fh:
        fh.write("t,x_true,y_true,x_est,y_est,error_m,bearing_count,flags\n")
        for r in records:
            if r.est is None:
                est_x = est_y = err = ""
            else:
                est_x = f"{r.est[0]:.6f}"
                est_y = f"{r.est[1]:.6f}"
                err = f"{r.error:.6f}"
            fh.write(f"{r.t:.3f},{r.true_pos[0]:.6f},{r.true_pos[1]:.6f},"
                     f"{est_x},{est_y},{err},{r.bearing_count},{'|'.join(r.flags)}\n")


def write_grid_csv(eg: ErrorGrid, path):
    """grid.csv: one line per visited cell, mean error blank when no fresh
    estimate fell in the cell."""
    with open(path, "w") as fh:
        fh.write("cell_i,cell_j,center_x,center_y,mean_error,visits\n")
        for i in range(eg.grid.width_cells):
            for j in range(eg.grid.height_cells):
                visits = eg.visit_count[i, j]
                if visits == 0:
                    continue
                c = eg.grid.cell_center(i, j)
                if eg.error_count[i, j] > 0:
                    mean = f"{eg.sum_error[i, j] / eg.error_count[i, j]:.6f}"
                else:
                    mean = ""
                fh.write(f"{i},{j},{c[0]:.3f},{c[1]:.3f},{mean},{visits}\n")
