"""sidesense: cooperative side-lobe interference sensing and least-squares
bearing fusion for localizing a moving blocker in a dense mmWave downlink.

The package splits into:

- geometry, deployment, channel: the random network and its radio physics
- sensing: per-sector S-SINR rows and rolling sensing matrices
- detection: SVD signature detector and a ground-truth bearing oracle
- localization: expected closest points and the 2x2 least-squares fusion
- motion, scenario, sweep: blocker motion, the timed loop, error grids
- config, cli: run configuration and the command line front end
"""

__version__ = "0.1.0"

from .geometry import (MeshGrid, SectorLayout, angle_between, cell_index,
                       sector_index, wrap_angle, wrap_to_pi)
from .channel import (BlockerState, Link, RadioParams, antenna_gain,
                      blocker_shadowing, flat_top_peak_gain,
                      nakagami_power_fading, pathloss_gain, rx_power)
from .deployment import (DeploymentParams, NetworkDeployment, build_deployment,
                         sample_ppp, select_cooperators)
from .sensing import (InterferenceContribution, SensingEngine, SensingMatrix,
                      interference_contributions, push_row, round_robin_target,
                      s_sinr_row, scheduled_targets, sector_interference,
                      serving_power)
from .detection import (DETECTION_THRESHOLD, DetectionResult, bearing_from_sector,
                        estimate_active_sector, oracle_bearing,
                        write_detection_trace)
from .localization import (BearingEstimate, FusionSingularError, SectorCoeffs,
                           closest_point_on_line, expected_closest_point,
                           fuse_bearings, fusion_objective, fusion_system,
                           oracle_fuse, quadrature_objective, read_bearing_file,
                           sector_coeffs)
from .motion import RandomWaypoint, RasterScan, WaypointList, raster_waypoints, step_motion
from .scenario import (ErrorGrid, ScenarioResult, StepRecord, accumulate_error_grid,
                       central_mean_error, deployment_for_config, run_scenario,
                       write_grid_csv, write_trajectory_csv)
from .config import (ConfigError, RunConfig, SweepSpec, parse_config,
                     parse_config_text, serialize_config, with_overrides)
from .sweep import AXIS_FIELDS, draw_rep_seed, rep_seed, run_sweep, summarize
