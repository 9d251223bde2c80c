"""Run configuration: flat key-value config files, strict parsing with
per-key errors, and defaults matching the reference simulation parameters."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

import numpy as np

from .channel import RadioParams
from .deployment import DeploymentParams
from .geometry import SectorLayout
from .motion import RandomWaypoint, RasterScan, WaypointList


class ConfigError(ValueError):
    """Invalid configuration; message names the offending key(s)."""


SWEEP_AXES = ("blocker_radius", "blocker_speed", "neighborhood_n")


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: which knob to vary, its values, repetitions per value."""

    axis: str
    values: tuple
    repetitions: int = 10

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ConfigError(f"sweep axis must be one of {SWEEP_AXES}, got {self.axis!r}")
        if len(self.values) == 0:
            raise ConfigError("sweep values must be non-empty")
        if self.repetitions < 1:
            raise ConfigError("sweep repetitions must be >= 1")


@dataclass(frozen=True)
class RunConfig:
    """Resolved parameters of one simulation run.

    All defaults follow the reference scenario: 100 m disk, PPP densities
    8e-4 / 2e-3 per m^2, the standard radio table, 36 sectors of 10 deg,
    a 50 s observation window and a 1 m blocker.  Angles are degrees in
    config files and radians internally.
    """

    radius_m: float = 100.0
    bs_density_per_m2: float = 8e-4
    ue_density_per_m2: float = 2e-3
    carrier_hz: float = 28e9
    bandwidth_hz: float = 400e6
    tx_power_dbm: float = 33.0
    noise_psd_dbm_hz: float = -174.0
    nakagami_m: float = 3.0
    tx_beamwidth_deg: float = 10.0
    rx_beamwidth_deg: float = 135.0
    tx_main_gain: float | None = None
    tx_side_gain: float | None = None
    rx_main_gain: float | None = None
    rx_side_gain: float | None = None
    blockage_attenuation_db: float = 100.0
    min_link_distance_m: float = 1.0
    sector_width_deg: float = 10.0
    window_tau_s: int = 50
    time_step_s: float = 1.0
    num_cooperators: int = 30
    include_typical_ue: bool = True
    detection_threshold: float = 0.4
    detection_min_rms_db: float = 5.0
    detection_recency: float = 0.5
    scheduling: str = "shared"
    estimator_mode: str = "svd"
    fading: bool = True
    blocker_radius_m: float = 1.0
    motion_model: str = "random_waypoint"
    speed_min_mps: float = 0.5
    speed_max_mps: float = 2.0
    blocker_speed_mps: float = 1.0
    raster_side_m: float = 50.0
    raster_lane_spacing_m: float = 3.0
    waypoints: tuple = ()
    duration_s: int | None = 300
    seed: int = 1
    grid_cell_m: float = 3.0
    detection_trace: bool = False

    # ---- derived objects -------------------------------------------------

    @property
    def sector_half_width(self) -> float:
        return math.radians(self.sector_width_deg) / 2.0

    def layout(self) -> SectorLayout:
        return SectorLayout.from_width_deg(self.sector_width_deg)

    def radio_params(self) -> RadioParams:
        return RadioParams(
            carrier_hz=self.carrier_hz,
            bandwidth_hz=self.bandwidth_hz,
            tx_power_dbm=self.tx_power_dbm,
            noise_psd_dbm_hz=self.noise_psd_dbm_hz,
            nakagami_m=self.nakagami_m,
            tx_beamwidth=math.radians(self.tx_beamwidth_deg),
            rx_beamwidth=math.radians(self.rx_beamwidth_deg),
            g_main_tx=self.tx_main_gain,
            g_side_tx=self.tx_side_gain,
            g_main_rx=self.rx_main_gain,
            g_side_rx=self.rx_side_gain,
            blockage_attenuation_db=self.blockage_attenuation_db,
            min_distance_m=self.min_link_distance_m,
        )

    def deployment_params(self, seed: int | None = None) -> DeploymentParams:
        return DeploymentParams(radius=self.radius_m, bs_density=self.bs_density_per_m2,
                                ue_density=self.ue_density_per_m2,
                                seed=self.seed if seed is None else seed)

    def motion(self):
        if self.motion_model == "random_waypoint":
            return RandomWaypoint(speed_range=(self.speed_min_mps, self.speed_max_mps),
                                  disk_radius=self.radius_m)
        if self.motion_model == "raster":
            return RasterScan(square_side=self.raster_side_m, speed=self.blocker_speed_mps,
                              lane_spacing=self.raster_lane_spacing_m)
        if self.motion_model == "waypoints":
            return WaypointList(np.asarray(self.waypoints, dtype=float),
                                speed=self.blocker_speed_mps)
        raise ConfigError(f"motion_model: unknown model {self.motion_model!r}")

    def resolved_duration(self) -> int:
        """Duration in steps; 'auto' covers one full raster pass plus warm-up."""
        if self.duration_s is not None:
            return self.duration_s
        if self.motion_model != "raster":
            raise ConfigError("duration_s: 'auto' requires raster motion")
        path = RasterScan(self.raster_side_m, self.blocker_speed_mps,
                          self.raster_lane_spacing_m).path_length()
        travel_steps = math.ceil(path / (self.blocker_speed_mps * self.time_step_s))
        return travel_steps + self.window_tau_s + 2

    # ---- validation ------------------------------------------------------

    def validate(self):
        """Collect all invariant violations, naming each offending key."""
        problems = []

        def check(ok, key, msg):
            if not ok:
                problems.append(f"{key}: {msg}")

        check(self.radius_m > 0, "radius_m", "must be > 0")
        check(self.bs_density_per_m2 > 0, "bs_density_per_m2", "must be > 0")
        check(self.ue_density_per_m2 > 0, "ue_density_per_m2", "must be > 0")
        check(self.bandwidth_hz > 0, "bandwidth_hz", "must be > 0")
        check(self.nakagami_m >= 0.5, "nakagami_m", "must be >= 0.5")
        check(0 < self.tx_beamwidth_deg < 360, "tx_beamwidth_deg", "must be in (0, 360)")
        check(0 < self.rx_beamwidth_deg < 360, "rx_beamwidth_deg", "must be in (0, 360)")
        for key in ("tx_main_gain", "tx_side_gain", "rx_main_gain", "rx_side_gain"):
            v = getattr(self, key)
            check(v is None or v >= 0, key, "must be >= 0 (or auto)")
        check(self.blockage_attenuation_db >= 0, "blockage_attenuation_db", "must be >= 0")
        check(self.min_link_distance_m > 0, "min_link_distance_m", "must be > 0")
        if self.sector_width_deg <= 0 or self.sector_width_deg > 180:
            problems.append("sector_width_deg: must be in (0, 180]")
        else:
            n = 360.0 / self.sector_width_deg
            check(abs(n - round(n)) < 1e-9, "sector_width_deg", "must divide 360")
        check(self.window_tau_s >= 1, "window_tau_s", "must be >= 1")
        check(self.time_step_s > 0, "time_step_s", "must be > 0")
        check(self.num_cooperators >= 0, "num_cooperators", "must be >= 0")
        check(0.0 <= self.detection_threshold <= 1.0, "detection_threshold",
              "must be in [0, 1]")
        check(self.detection_min_rms_db >= 0.0, "detection_min_rms_db", "must be >= 0")
        check(0.0 <= self.detection_recency <= 1.0, "detection_recency",
              "must be in [0, 1]")
        check(self.scheduling in ("shared", "round_robin"), "scheduling",
              "must be 'shared' or 'round_robin'")
        check(self.estimator_mode in ("svd", "oracle"), "estimator_mode",
              "must be 'svd' or 'oracle'")
        check(self.blocker_radius_m > 0, "blocker_radius_m", "must be > 0")
        check(self.motion_model in ("random_waypoint", "raster", "waypoints"),
              "motion_model", "must be random_waypoint, raster or waypoints")
        check(self.speed_min_mps > 0, "speed_min_mps", "must be > 0")
        check(self.speed_max_mps >= self.speed_min_mps, "speed_max_mps",
              "must be >= speed_min_mps")
        check(self.blocker_speed_mps > 0, "blocker_speed_mps", "must be > 0")
        check(self.raster_side_m > 0, "raster_side_m", "must be > 0")
        check(self.raster_lane_spacing_m > 0, "raster_lane_spacing_m", "must be > 0")
        if self.motion_model == "waypoints":
            check(len(self.waypoints) >= 1, "waypoints", "must list at least one point")
            for p in self.waypoints:
                if math.hypot(p[0], p[1]) > self.radius_m:
                    problems.append(f"waypoints: point {p} outside the {self.radius_m} m disk")
                    break
        if self.motion_model == "raster":
            half_diag = self.raster_side_m / 2.0 * math.sqrt(2.0)
            check(half_diag <= self.radius_m, "raster_side_m",
                  "raster square must fit inside the disk")
        check(self.duration_s is None or self.duration_s >= 1, "duration_s",
              "must be >= 1 or auto")
        check(self.duration_s is not None or self.motion_model == "raster",
              "duration_s", "'auto' requires raster motion")
        check(self.seed >= 0, "seed", "must be >= 0")
        check(self.grid_cell_m > 0, "grid_cell_m", "must be > 0")
        if problems:
            raise ConfigError("; ".join(problems))
        return self


# ---- flat key-value file format -------------------------------------------

_BOOL_KEYS = {"include_typical_ue", "fading", "detection_trace"}
_INT_KEYS = {"window_tau_s", "num_cooperators", "seed"}
_STR_KEYS = {"estimator_mode", "motion_model", "scheduling"}
_OPTIONAL_FLOAT_KEYS = {"tx_main_gain", "tx_side_gain", "rx_main_gain", "rx_side_gain"}


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if key == "waypoints":
        pts = []
        for part in filter(None, (p.strip() for p in raw.split(";"))):
            xy = part.split(",")
            if len(xy) != 2:
                raise ConfigError(f"waypoints: expected 'x,y' pairs, got {part!r}")
            pts.append((float(xy[0]), float(xy[1])))
        return tuple(pts)
    if key == "duration_s":
        if raw.lower() == "auto":
            return None
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"duration_s: expected integer or 'auto', got {raw!r}") from None
    if key in _BOOL_KEYS:
        low = raw.lower()
        if low in ("true", "yes", "1"):
            return True
        if low in ("false", "no", "0"):
            return False
        raise ConfigError(f"{key}: expected true/false, got {raw!r}")
    if key in _INT_KEYS:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{key}: expected integer, got {raw!r}") from None
    if key in _STR_KEYS:
        return raw
    if key in _OPTIONAL_FLOAT_KEYS and raw.lower() == "auto":
        return None
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{key}: expected number, got {raw!r}") from None


def parse_config_text(text: str, source: str = "<config>") -> RunConfig:
    """Parse flat ``key: value`` lines into a validated RunConfig.

    Unknown keys, type errors and invariant violations raise ConfigError
    with the key path; an empty file yields the full defaults.
    """
    known = {f.name for f in fields(RunConfig)}
    overrides = {}
    problems = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            problems.append(f"{source}:{lineno}: expected 'key: value', got {line!r}")
            continue
        key, _, value = line.partition(":")
        key = key.strip()
        if key not in known:
            problems.append(f"{source}:{lineno}: unknown key {key!r}")
            continue
        if key in overrides:
            problems.append(f"{source}:{lineno}: duplicate key {key!r}")
            continue
        try:
            overrides[key] = _parse_value(key, value)
        except ConfigError as exc:
            problems.append(f"{source}:{lineno}: {exc}")
    if problems:
        raise ConfigError("; ".join(problems))
    return RunConfig(**overrides).validate()


def parse_config(path) -> RunConfig:
    """Parse a config file; missing files raise ConfigError."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config_text(text, source=str(path))


def serialize_config(config: RunConfig) -> str:
    """Emit the resolved config as parseable ``key: value`` lines."""
    lines = []
    for f in fields(RunConfig):
        v = getattr(config, f.name)
        if f.name == "waypoints":
            v = "; ".join(f"{x!r},{y!r}" for x, y in v)
        elif v is None:
            v = "auto"
        elif isinstance(v, bool):
            v = "true" if v else "false"
        elif isinstance(v, float):
            v = repr(v)
        lines.append(f"{f.name}: {v}")
    return "\n".join(lines) + "\n"


def with_overrides(config: RunConfig, **kwargs) -> RunConfig:
    """Replace fields (dropping None values) and re-validate."""
    updates = {k: v for k, v in kwargs.items() if v is not None}
    return replace(config, **updates).validate() if updates else config
