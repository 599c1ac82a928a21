import json
import math

import numpy as np
import pytest

from mabeam.cli import ConfigError, build_parser, load_config, main

SMALL_CONFIG = """\
[array]
carrier_frequency_hz = 1.0e9
num_antennas = 4
aperture_wavelengths = 10.0
min_spacing_wavelengths = 0.5

[[regions]]
theta_min_deg = 0.0
theta_max_deg = 20.0

[[regions]]
theta_min_deg = 150.0
theta_max_deg = 180.0

[grid]
num_positions = 120
angular_step_deg = 1.0

[optimizer]
gibbs_rounds = 10
max_outer_rounds = 8
seed = 3

[run]
pattern_step_deg = 1.0
"""


@pytest.fixture
def small_config(tmp_path):
    path = tmp_path / "small.toml"
    path.write_text(SMALL_CONFIG)
    return path


def read_pattern(path):
    rows = path.read_text().splitlines()
    assert rows[0] == "angle_deg,gain_linear,gain_db,in_region"
    parsed = [row.split(",") for row in rows[1:]]
    return (
        np.array([float(r[0]) for r in parsed]),
        np.array([float(r[1]) for r in parsed]),
        np.array([float(r[2]) for r in parsed]),
        np.array([int(r[3]) for r in parsed], dtype=bool),
    )


class TestRun:
    def test_artifacts_and_self_consistency(self, small_config, tmp_path):
        outdir = tmp_path / "out"
        code = main(
            [
                "run",
                "--config",
                str(small_config),
                "--seed",
                "3",
                "--output-dir",
                str(outdir),
                "--emit-trace",
            ]
        )
        assert code == 0
        summary = json.loads((outdir / "mnf-su-gs-seed3-summary.json").read_text())
        angles, lin, db, in_region = read_pattern(outdir / "mnf-su-gs-seed3-pattern.csv")
        assert angles.size == 181  # 1 deg steps over [0, 180]
        assert angles[0] == 0.0 and angles[-1] == 180.0
        assert np.all(lin >= 0.0) and np.all(lin <= 4.0 + 1e-9)
        region_min = lin[in_region].min()
        assert summary["min_gain_linear"] == pytest.approx(region_min, abs=1e-6)
        assert summary["min_gain_db"] == pytest.approx(
            10 * math.log10(region_min), abs=1e-6
        )
        flagged = (
            ((angles >= -1e-9) & (angles <= 20 + 1e-9))
            | ((angles >= 150 - 1e-9) & (angles <= 180 + 1e-9))
        )
        assert np.array_equal(in_region, flagged)
        trace = (outdir / "mnf-su-gs-seed3-trace.csv").read_text().splitlines()
        assert trace[0] == "round,objective_su,objective"
        objectives = [float(line.split(",")[2]) for line in trace[1:]]
        assert objectives == sorted(objectives)

    def test_summary_matches_solution_record(self, small_config, tmp_path):
        outdir = tmp_path / "out"
        assert main(
            ["run", "--config", str(small_config), "--output-dir", str(outdir)]
        ) == 0
        summary = json.loads((outdir / "mnf-su-gs-seed3-summary.json").read_text())
        assert summary["num_antennas"] == 4
        positions = np.array(summary["positions_m"])
        waves = np.array(summary["positions_wavelengths"])
        assert np.allclose(positions / summary["wavelength_m"], waves, atol=1e-12)
        weights = np.array([complex(re, im) for re, im in summary["weights"]])
        assert abs(np.sum(np.abs(weights) ** 2) - 1.0) < 1e-9
        assert np.all(np.diff(positions) >= summary["wavelength_m"] / 2 - 1e-9)

    def test_fpa_single_antenna_zero_db(self, tmp_path):
        config = tmp_path / "one.toml"
        config.write_text(
            "[array]\nnum_antennas = 1\n\n[run]\nalgorithm = \"fpa\"\n"
        )
        outdir = tmp_path / "out"
        assert main(
            ["run", "--config", str(config), "--output-dir", str(outdir)]
        ) == 0
        summary = json.loads((outdir / "fpa-seed0-summary.json").read_text())
        assert summary["min_gain_db"] == 0.0

    def test_reruns_are_byte_identical(self, small_config, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        for outdir in (out1, out2):
            assert main(
                ["run", "--config", str(small_config), "--output-dir", str(outdir)]
            ) == 0
        p1 = (out1 / "mnf-su-gs-seed3-pattern.csv").read_bytes()
        p2 = (out2 / "mnf-su-gs-seed3-pattern.csv").read_bytes()
        assert p1 == p2
        s1 = json.loads((out1 / "mnf-su-gs-seed3-summary.json").read_text())
        s2 = json.loads((out2 / "mnf-su-gs-seed3-summary.json").read_text())
        s1.pop("runtime_seconds"), s2.pop("runtime_seconds")
        assert s1 == s2

    def test_invalid_region_names_offender(self, tmp_path, capsys):
        config = tmp_path / "bad.toml"
        config.write_text(
            "[[regions]]\ntheta_min_deg = 0.0\ntheta_max_deg = 20.0\n\n"
            "[[regions]]\ntheta_min_deg = 170.0\ntheta_max_deg = 150.0\n"
        )
        assert main(["run", "--config", str(config)]) == 2
        err = capsys.readouterr().err
        assert "error: config:" in err and "regions[1]" in err

    def test_unknown_key_rejected(self, tmp_path, capsys):
        config = tmp_path / "bad.toml"
        config.write_text("[array]\nnum_antenas = 8\n")
        assert main(["run", "--config", str(config)]) == 2
        assert "unknown key 'num_antenas'" in capsys.readouterr().err

    def test_missing_config_file(self, tmp_path, capsys):
        assert main(["run", "--config", str(tmp_path / "nope.toml")]) == 2
        assert "error: config:" in capsys.readouterr().err

    def test_statically_infeasible_array_is_config_error(self, tmp_path, capsys):
        config = tmp_path / "tight.toml"
        config.write_text("[array]\nnum_antennas = 30\naperture_wavelengths = 2.0\n")
        assert main(["run", "--config", str(config)]) == 2
        assert "error: config:" in capsys.readouterr().err

    def test_grid_too_coarse_is_infeasible_geometry(self, tmp_path, capsys):
        # the array fits the segment, but a 10-point grid cannot space 8 antennas
        config = tmp_path / "coarse.toml"
        config.write_text(
            "[array]\nnum_antennas = 8\naperture_wavelengths = 4.0\n\n"
            "[grid]\nnum_positions = 10\n"
        )
        assert main(["run", "--config", str(config)]) == 1
        assert "infeasible geometry" in capsys.readouterr().err


class TestCompare:
    def test_gibbs_never_below_sequential_only(self, small_config, tmp_path, capsys):
        outdir = tmp_path / "cmp"
        code = main(
            [
                "compare",
                "--config",
                str(small_config),
                "--algorithm",
                "mnf-su",
                "--algorithm",
                "mnf-su-gs",
                "--seeds",
                "3",
                "--output-dir",
                str(outdir),
            ]
        )
        assert code == 0
        rows = (outdir / "compare.csv").read_text().splitlines()
        assert rows[0] == "algorithm,num_antennas,seed,min_gain_db,runtime_seconds,status"
        table = {r.split(",")[0]: r.split(",") for r in rows[1:]}
        assert float(table["mnf-su-gs"][3]) >= float(table["mnf-su"][3])
        assert table["mnf-su"][5] == "ok" and table["mnf-su-gs"][5] == "ok"

    def test_rows_sorted_and_jobs_parallel(self, small_config, tmp_path):
        outdir = tmp_path / "cmp"
        assert main(
            [
                "compare",
                "--config",
                str(small_config),
                "--algorithm",
                "fpa",
                "--algorithm",
                "random",
                "--seeds",
                "2,1",
                "--jobs",
                "2",
                "--output-dir",
                str(outdir),
            ]
        ) == 0
        rows = [r.split(",") for r in (outdir / "compare.csv").read_text().splitlines()[1:]]
        keys = [(r[0], int(r[2])) for r in rows]
        assert keys == sorted(keys)

    def test_failed_cell_annotated_without_aborting(self, small_config, tmp_path):
        outdir = tmp_path / "cmp"
        assert main(
            [
                "compare",
                "--config",
                str(small_config),
                "--algorithm",
                "exhaustive",  # 4.8M combinations, over the cap
                "--algorithm",
                "fpa",
                "--seeds",
                "0",
                "--output-dir",
                str(outdir),
            ]
        ) == 0
        rows = [r.split(",") for r in (outdir / "compare.csv").read_text().splitlines()[1:]]
        by_alg = {r[0]: r for r in rows}
        assert by_alg["fpa"][5] == "ok"
        assert by_alg["exhaustive"][5].startswith("error:")

    def test_empty_seed_list_rejected(self, small_config, capsys):
        assert main(
            ["compare", "--config", str(small_config), "--seeds", ""]
        ) == 2
        assert "empty seed list" in capsys.readouterr().err

    def test_bad_seed_list_rejected(self, small_config, capsys):
        assert main(
            ["compare", "--config", str(small_config), "--seeds", "1,x"]
        ) == 2
        assert "seeds must be integers" in capsys.readouterr().err


class TestConfigResolution:
    def test_defaults_match_shipped_experiment(self):
        config = load_config(None)
        assert config.array.num_antennas == 8
        assert config.array.wavelength == pytest.approx(0.299792458)
        assert config.array.aperture == pytest.approx(10 * 0.299792458)
        assert config.num_positions == 500
        assert config.angular_step_deg == 0.5
        assert config.optimizer.gibbs_rounds == 50
        assert config.optimizer.max_index_shift == 2
        assert config.optimizer.gibbs_temperature == 5.0
        assert config.optimizer.candidates_per_step == 10
        assert [r[:2] for r in config.regions_deg] == [(0.0, 20.0), (150.0, 180.0)]
        assert config.pattern_step_deg == 0.1

    def test_meter_units_take_precedence(self, tmp_path):
        path = tmp_path / "units.toml"
        path.write_text(
            "[array]\nwavelength_m = 0.5\naperture_m = 4.0\nmin_spacing_m = 0.25\n"
            "num_antennas = 4\naperture_wavelengths = 99.0\n"
        )
        config = load_config(path)
        assert config.array.wavelength == 0.5
        assert config.array.aperture == 4.0
        assert config.array.min_spacing == 0.25

    def test_flag_overrides_beat_file_values(self, small_config):
        config = load_config(small_config, {"optimizer.seed": 42, "run.algorithm": "fpa"})
        assert config.optimizer.seed == 42
        assert config.algorithm == "fpa"

    def test_unknown_algorithm_rejected(self, tmp_path):
        path = tmp_path / "alg.toml"
        path.write_text('[run]\nalgorithm = "simulated-annealing"\n')
        with pytest.raises(ConfigError, match="unknown algorithm"):
            load_config(path)

    def test_parser_flags_exist(self):
        parser = build_parser()
        args = parser.parse_args(
            ["run", "--config", "c.toml", "--algorithm", "fpa", "--seed", "9",
             "--output-dir", "o", "--pattern-step", "0.5", "--emit-trace"]
        )
        assert args.command == "run" and args.seed == 9
        args = parser.parse_args(
            ["compare", "--seeds", "1,2", "--jobs", "3", "--algorithm", "fpa"]
        )
        assert args.command == "compare" and args.jobs == 3
