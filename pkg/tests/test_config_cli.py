import math

import pytest

from sidesense import (ConfigError, RunConfig, parse_config, parse_config_text,
                       serialize_config, with_overrides)
from sidesense.cli import main


class TestParseConfig:
    def test_empty_file_yields_full_defaults(self, tmp_path):
        path = tmp_path / "empty.cfg"
        path.write_text("")
        assert parse_config(path) == RunConfig()

    def test_defaults_match_reference_table(self):
        cfg = RunConfig()
        assert cfg.radius_m == 100.0
        assert cfg.bs_density_per_m2 == 8e-4
        assert cfg.ue_density_per_m2 == 2e-3
        assert cfg.carrier_hz == 28e9
        assert cfg.bandwidth_hz == 400e6
        assert cfg.tx_power_dbm == 33.0
        assert cfg.noise_psd_dbm_hz == -174.0
        assert cfg.nakagami_m == 3.0
        assert cfg.tx_beamwidth_deg == 10.0
        assert cfg.rx_beamwidth_deg == 135.0
        assert cfg.blockage_attenuation_db == 100.0
        assert cfg.sector_width_deg == 10.0
        assert cfg.window_tau_s == 50
        assert cfg.layout().sector_count == 36

    def test_sector_width_converts_to_half_width_radians(self):
        cfg = parse_config_text("sector_width_deg: 10")
        assert cfg.sector_half_width == pytest.approx(math.radians(5.0))

    def test_invariant_violation_names_key(self):
        with pytest.raises(ConfigError, match="nakagami_m"):
            parse_config_text("nakagami_m: 0.2")

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="blocker_diameter"):
            parse_config_text("blocker_diameter: 2.0")

    def test_duplicate_key_rejected(self):
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config_text("seed: 1\nseed: 2")

    def test_type_errors_name_key_and_line(self):
        with pytest.raises(ConfigError, match="<config>:2.*seed"):
            parse_config_text("radius_m: 100\nseed: lots")

    def test_comments_and_blank_lines_ignored(self):
        cfg = parse_config_text("# a comment\n\nseed: 12  # trailing\n")
        assert cfg.seed == 12

    def test_waypoints_parsed(self):
        cfg = parse_config_text(
            "motion_model: waypoints\nwaypoints: 0,0; 10,0; 10,5\nduration_s: 60")
        assert cfg.waypoints == ((0.0, 0.0), (10.0, 0.0), (10.0, 5.0))

    def test_waypoint_outside_disk_rejected(self):
        with pytest.raises(ConfigError, match="waypoints"):
            parse_config_text("motion_model: waypoints\nwaypoints: 500,0")

    def test_auto_duration_requires_raster(self):
        with pytest.raises(ConfigError, match="duration_s"):
            parse_config_text("duration_s: auto")
        cfg = parse_config_text("motion_model: raster\nduration_s: auto")
        assert cfg.resolved_duration() == math.ceil(898.0) + 50 + 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            parse_config(tmp_path / "nope.cfg")

    def test_round_trip(self):
        cfg = RunConfig(seed=42, estimator_mode="oracle", blocker_radius_m=0.75,
                        motion_model="waypoints", waypoints=((1.0, 2.0), (3.0, 4.0)),
                        duration_s=120, rx_side_gain=0.125, detection_trace=True)
        assert parse_config_text(serialize_config(cfg)) == cfg

    def test_round_trip_auto_fields(self):
        cfg = RunConfig(motion_model="raster", duration_s=None)
        again = parse_config_text(serialize_config(cfg))
        assert again == cfg
        assert again.duration_s is None

    def test_gain_override_flows_to_radio(self):
        cfg = parse_config_text("rx_side_gain: 0.2")
        assert cfg.radio_params().g_side_rx == 0.2
        # default is the null side lobe
        assert RunConfig().radio_params().g_side_rx == 0.0

    def test_multiple_problems_reported_together(self):
        with pytest.raises(ConfigError) as err:
            parse_config_text("nakagami_m: 0.1\nblocker_radius_m: -1")
        assert "nakagami_m" in str(err.value)
        assert "blocker_radius_m" in str(err.value)

    def test_with_overrides_validates(self):
        cfg = RunConfig()
        with pytest.raises(ConfigError):
            with_overrides(cfg, nakagami_m=0.1)
        assert with_overrides(cfg, seed=9).seed == 9


def run_cli(*argv):
    return main(list(argv))


class TestCliSimulate:
    def test_default_oracle_run_outputs(self, tmp_path, capsys):
        out = tmp_path / "run"
        code = run_cli("simulate", "--mode", "oracle", "--seed", "3", "--out", str(out))
        assert code == 0
        traj = (out / "trajectory.csv").read_text().strip().splitlines()
        assert len(traj) == 1 + (300 - 50)  # header + duration - tau records
        assert (out / "grid.csv").exists()
        manifest = (out / "manifest.txt").read_text()
        assert "seed: 3" in manifest and "estimator_mode: oracle" in manifest

    def test_byte_identical_reruns(self, tmp_path):
        cfg = tmp_path / "fast.cfg"
        cfg.write_text("estimator_mode: oracle\nduration_s: 80\nnum_cooperators: 8\n"
                       "motion_model: random_waypoint\nseed: 5\n")
        a, b = tmp_path / "a", tmp_path / "b"
        assert run_cli("simulate", "--config", str(cfg), "--out", str(a)) == 0
        assert run_cli("simulate", "--config", str(cfg), "--out", str(b)) == 0
        assert (a / "trajectory.csv").read_bytes() == (b / "trajectory.csv").read_bytes()
        assert (a / "grid.csv").read_bytes() == (b / "grid.csv").read_bytes()

    def test_config_error_exit_code(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("nakagami_m: 0.1\n")
        assert run_cli("simulate", "--config", str(cfg), "--out", str(tmp_path / "o")) == 2
        assert "nakagami_m" in capsys.readouterr().err

    def test_unwritable_out_dir_exit_code(self, tmp_path, capsys):
        blocker = tmp_path / "not_a_dir"
        blocker.write_text("file in the way")
        code = run_cli("simulate", "--mode", "oracle", "--out", str(blocker))
        assert code == 3

    def test_detection_trace_emitted(self, tmp_path):
        cfg = tmp_path / "trace.cfg"
        cfg.write_text("duration_s: 60\nnum_cooperators: 3\ndetection_trace: true\n"
                       "motion_model: raster\nraster_side_m: 20\nseed: 2\n")
        out = tmp_path / "out"
        assert run_cli("simulate", "--config", str(cfg), "--out", str(out)) == 0
        trace = (out / "detections.csv").read_text().strip().splitlines()
        assert trace[0] == "t,ue,sector,confidence,detected"
        assert len(trace) == 1 + 10 * 4  # 10 post-warm-up steps x 4 cooperators


class TestCliLocalize:
    def test_single_bearing(self, tmp_path, capsys):
        f = tmp_path / "one.txt"
        f.write_text("2 3 0 5\n")
        assert run_cli("localize", str(f)) == 0
        assert capsys.readouterr().out.strip() == "2.0000 3.0000"

    def test_perpendicular_fixture(self, tmp_path, capsys):
        f = tmp_path / "two.txt"
        f.write_text("0, 0, 0, 5\n5, 5, -90, 5\n")
        assert run_cli("localize", str(f)) == 0
        assert capsys.readouterr().out.strip() == "4.9873 0.0127"

    def test_comments_allowed(self, tmp_path, capsys):
        f = tmp_path / "c.txt"
        f.write_text("# sensors\n2 3 0 5  # the only one\n")
        assert run_cli("localize", str(f)) == 0
        assert capsys.readouterr().out.strip() == "2.0000 3.0000"

    def test_empty_file_is_error(self, tmp_path, capsys):
        f = tmp_path / "empty.txt"
        f.write_text("\n# nothing\n")
        assert run_cli("localize", str(f)) == 2
        assert "no bearings" in capsys.readouterr().err

    def test_malformed_line_reports_number(self, tmp_path, capsys):
        f = tmp_path / "bad.txt"
        f.write_text("2 3 0 5\n1 2 three 4\n")
        assert run_cli("localize", str(f)) == 2
        assert ":2:" in capsys.readouterr().err


class TestCliSweep:
    def test_small_sweep(self, tmp_path):
        cfg = tmp_path / "sweep.cfg"
        cfg.write_text("num_cooperators: 4\nmotion_model: raster\nraster_side_m: 12\n"
                       "duration_s: auto\nseed: 6\n")
        out = tmp_path / "sw"
        code = run_cli("sweep", "--config", str(cfg), "--axis", "blocker_radius",
                       "--values", "0.5,1", "--reps", "2", "--out", str(out))
        assert code == 0
        assert len(list(out.glob("grid_*.csv"))) == 4
        summary = (out / "summary.csv").read_text().strip().splitlines()
        assert len(summary) == 3
        assert (out / "manifest.txt").exists()

    def test_bad_values_exit_code(self, tmp_path, capsys):
        assert run_cli("sweep", "--axis", "blocker_radius", "--values", "a,b",
                       "--out", str(tmp_path / "x")) == 2

    def test_non_integer_neighborhood_rejected(self, tmp_path):
        assert run_cli("sweep", "--axis", "neighborhood_n", "--values", "2.5",
                       "--out", str(tmp_path / "x")) == 2
