"""End-to-end checks of the command line interface, run in-process."""

import csv
import json

import pytest

from terrapose import cli
from terrapose.schemas import OUTPUT_DIR_ENV, SCHEMA_VERSION


def _scenario(data_dir, name):
    return str(data_dir / "scenarios" / f"{name}.json")


def _read_json(out_dir, name):
    with open(out_dir / f"{name}_results.json", encoding="utf-8") as fh:
        return json.load(fh)


def _read_csv(path):
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.reader(fh))


class TestPoseCommand:
    def test_flat_scenario_converges_and_writes_outputs(self, tmp_path, data_dir, capsys):
        rc = cli.main(["pose", _scenario(data_dir, "example1_flat"), "--out", str(tmp_path)])
        assert rc == 0

        doc = _read_json(tmp_path, "example1_flat")
        assert doc["schema_version"] == SCHEMA_VERSION
        assert doc["scenario"] == "example1_flat"
        assert doc["mode"] == "vertical"
        assert len(doc["results"]) == 1
        result = doc["results"][0]
        assert result["u"] is None
        assert result["contacts"] == [True] * 6
        expected = 500.0 * 9.8 / 6.0
        for force in result["forces"]:
            assert force == pytest.approx(expected, rel=1e-2)
        assert sum(result["forces"]) == pytest.approx(500.0 * 9.8, rel=1e-3)
        assert result["iterations"] > 0

        rows = _read_csv(tmp_path / "example1_flat_summary.csv")
        assert rows[0][:10] == [
            "u", "x", "y", "yaw", "z", "roll_deg", "pitch_deg",
            "contacts", "iterations", "elapsed",
        ]
        assert rows[1][7] == "111111"

        out = capsys.readouterr().out
        assert "example1_flat: converged" in out
        assert "wrote" in out

    def test_bump_scenario_contact_bitmap(self, tmp_path, data_dir):
        rc = cli.main(["pose", _scenario(data_dir, "example3_bump"), "--out", str(tmp_path)])
        assert rc == 0
        result = _read_json(tmp_path, "example3_bump")["results"][0]
        assert sum(result["contacts"]) == 4
        for contact, force in zip(result["contacts"], result["forces"]):
            if not contact:
                assert force == 0.0

    def test_trace_has_one_record_per_iteration(self, tmp_path, data_dir):
        rc = cli.main([
            "pose", _scenario(data_dir, "example1_flat"), "--out", str(tmp_path), "--trace",
        ])
        assert rc == 0
        result = _read_json(tmp_path, "example1_flat")["results"][0]
        with open(tmp_path / "example1_flat_trace.ndjson", encoding="utf-8") as fh:
            records = [json.loads(line) for line in fh]
        assert len(records) == result["iterations"]
        assert [r["iteration"] for r in records] == list(range(len(records)))
        assert [r["terminal"] for r in records] == [False] * (len(records) - 1) + [True]
        assert set(records[0]) >= {"q", "v", "accel", "gaps", "forces", "active"}

    def test_mode_override_recorded_in_results(self, tmp_path, data_dir):
        rc = cli.main([
            "pose", _scenario(data_dir, "example1_flat"),
            "--out", str(tmp_path), "--mode", "normal",
        ])
        assert rc == 0
        assert _read_json(tmp_path, "example1_flat")["mode"] == "normal"

    def test_output_dir_from_environment(self, tmp_path, data_dir, monkeypatch):
        monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
        rc = cli.main(["pose", _scenario(data_dir, "example1_flat")])
        assert rc == 0
        assert (tmp_path / "example1_flat_results.json").exists()
        assert (tmp_path / "example1_flat_summary.csv").exists()


class TestPathCommand:
    def test_sample_override_and_u_column(self, tmp_path, data_dir):
        rc = cli.main([
            "path", _scenario(data_dir, "example4_rock_path"),
            "--samples", "3", "--out", str(tmp_path),
        ])
        assert rc == 0
        doc = _read_json(tmp_path, "example4_rock_path")
        us = [r["u"] for r in doc["results"]]
        assert us == [0.0, 0.5, 1.0]
        for result in doc["results"]:
            assert sum(result["contacts"]) >= 1
        rows = _read_csv(tmp_path / "example4_rock_path_summary.csv")
        assert len(rows) == 4  # header + one row per sample
        assert [float(row[0]) for row in rows[1:]] == us


class TestErrorHandling:
    def test_missing_scenario_file(self, tmp_path, capsys):
        rc = cli.main(["pose", str(tmp_path / "absent.json")])
        assert rc == 1
        err = json.loads(capsys.readouterr().err)
        assert err["error"]["kind"] == "schema"
        assert "file not found" in err["error"]["message"]

    def test_malformed_scenario_json(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{definitely not json", encoding="utf-8")
        rc = cli.main(["pose", str(bad)])
        assert rc == 1
        assert json.loads(capsys.readouterr().err)["error"]["kind"] == "schema"

    def test_pose_subcommand_rejects_path_query(self, data_dir, capsys):
        rc = cli.main(["pose", _scenario(data_dir, "example4_rock_path")])
        assert rc == 1
        err = json.loads(capsys.readouterr().err)
        assert err["error"]["kind"] == "schema"
        assert "'path' query" in err["error"]["message"]

    def test_path_subcommand_rejects_pose_query(self, data_dir, capsys):
        rc = cli.main(["path", _scenario(data_dir, "example1_flat")])
        assert rc == 1
        assert json.loads(capsys.readouterr().err)["error"]["kind"] == "schema"

    def test_iteration_cap_exits_with_solver_error(self, tmp_path, capsys):
        # A tiny flat world whose iteration budget cannot reach equilibrium.
        rows, cols = 5, 6
        terrain = {
            "schema_version": SCHEMA_VERSION,
            "rows": rows,
            "cols": cols,
            "origin_x": -1.0,
            "origin_y": -2.0,
            "spacing": 0.5,
            "heights": [0.0] * (rows * cols),
        }
        vehicle = {
            "schema_version": SCHEMA_VERSION,
            "mass": 500.0,
            "inertia_roll": 44.0,
            "inertia_pitch": 104.0,
            "wheel_radius": 0.15,
            "wheels": [[0.4, 0.3, -0.2], [-0.4, 0.3, -0.2],
                       [0.4, -0.3, -0.2], [-0.4, -0.3, -0.2]],
        }
        scenario = {
            "schema_version": SCHEMA_VERSION,
            "terrain": "terrain.json",
            "vehicle": "vehicle.json",
            "query": {"pose": {"x": 0.25, "y": -1.0, "yaw": 0.0}},
            "params": {"max_iterations": 3},
        }
        (tmp_path / "terrain.json").write_text(json.dumps(terrain), encoding="utf-8")
        (tmp_path / "vehicle.json").write_text(json.dumps(vehicle), encoding="utf-8")
        (tmp_path / "stuck.json").write_text(json.dumps(scenario), encoding="utf-8")

        rc = cli.main(["pose", str(tmp_path / "stuck.json"), "--out", str(tmp_path)])
        assert rc == 2
        err = json.loads(capsys.readouterr().err)
        assert err["error"]["kind"] == "solver"
        assert "no equilibrium" in err["error"]["message"]

    def test_bad_wheel_list(self, tmp_path, capsys):
        rc = cli.main(["bench", "--wheels", "4,x", "--out", str(tmp_path / "b.csv")])
        assert rc == 1
        err = json.loads(capsys.readouterr().err)
        assert err["error"]["kind"] == "schema"
        assert "--wheels" in err["error"]["message"]


class TestBenchCommands:
    def test_bench_csv_layout(self, tmp_path):
        out = tmp_path / "bench.csv"
        rc = cli.main(["bench", "--wheels", "4,6", "--reps", "3", "--out", str(out)])
        assert rc == 0
        rows = _read_csv(out)
        assert rows[0] == [
            "wheel_count", "mean_svd", "mean_lcp", "stddev_svd", "stddev_lcp", "repetitions",
        ]
        assert [row[0] for row in rows[1:]] == ["4", "6"]
        for row in rows[1:]:
            assert float(row[1]) > 0.0 and float(row[2]) > 0.0
            assert row[5] == "3"

    def test_bench_single_repetition_has_zero_spread(self, tmp_path):
        out = tmp_path / "bench.csv"
        rc = cli.main(["bench", "--wheels", "4", "--reps", "1", "--out", str(out)])
        assert rc == 0
        row = _read_csv(out)[1]
        assert float(row[3]) == 0.0 and float(row[4]) == 0.0

    def test_bench_default_output_respects_environment(self, tmp_path, monkeypatch):
        monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
        rc = cli.main(["bench", "--wheels", "4", "--reps", "1"])
        assert rc == 0
        assert (tmp_path / "bench.csv").exists()

    def test_bench_kernels_covers_every_backend(self, tmp_path):
        from terrapose import kernels

        out = tmp_path / "kernels.csv"
        rc = cli.main(["bench-kernels", "--points", "200", "--reps", "2", "--out", str(out)])
        assert rc == 0
        methods = {row[0] for row in _read_csv(out)[1:]}
        expected = set()
        for backend in kernels.available_backends():
            expected.add(f"heights/{backend}")
            expected.add(f"drop/{backend}")
        assert methods == expected


class TestTopLevel:
    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            cli.main(["--version"])
        assert excinfo.value.code == 0
        assert "terrapose" in capsys.readouterr().out
