import json

import numpy as np
import pytest

import phasedamp as pd
from phasedamp import cli

FAST_FLAGS = ["--restarts", "6"]


def write_channel(tmp_path, channel, name="channel.json"):
    path = tmp_path / name
    path.write_text(pd.channel_to_json(channel))
    return str(path)


def read_rows(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    rows = [dict(zip(header, line.split(","))) for line in lines[1:]]
    return header, rows


class TestAnalyze:
    def run_analyze(self, tmp_path, channel, capsys, extra=()):
        path = write_channel(tmp_path, channel)
        code = cli.main(["analyze", "--in", path, *FAST_FLAGS, *extra])
        out = capsys.readouterr().out
        return code, json.loads(out)

    def test_tetra_report(self, tmp_path, capsys):
        code, report = self.run_analyze(tmp_path, pd.tetra_channel(), capsys)
        assert code == 0
        assert report["n"] == 4
        assert report["rank"] == 2
        assert report["certified_non_ru"] is True
        assert report["purity"] == pytest.approx(0.5, abs=1e-12)
        assert report["v_b"] == pytest.approx(8 * np.sqrt(3) / 27, abs=1e-10)
        assert report["q_a"] == pytest.approx(0.1037594, abs=2e-3)
        assert report["subvolume"] is None

    def test_completely_decohering_report(self, tmp_path, capsys):
        code, report = self.run_analyze(tmp_path, pd.completely_decohering(4), capsys)
        assert code == 0
        assert report["certified_non_ru"] is False
        assert report["purity"] == pytest.approx(0.25, abs=1e-12)
        assert report["q_a"] < 1e-3

    def test_unitary_channel_report(self, tmp_path, capsys):
        ones = pd.PhaseDampingChannel(4, np.ones((4, 4), dtype=complex))
        code, report = self.run_analyze(tmp_path, ones, capsys)
        assert code == 0
        assert report["purity"] == pytest.approx(1.0, abs=1e-12)
        assert report["v_b"] == 0.0
        assert report["q_a"] < 1e-6

    def test_subvolume_reported_when_rank_squared_below_n(self, tmp_path, capsys):
        dv = pd.vectors_from_channel(pd.tetra_channel())
        vecs = np.vstack([dv.vectors, dv.vectors[:1]])
        five = pd.channel_from_vectors(pd.DynamicalVectors(5, 2, vecs))
        code, report = self.run_analyze(tmp_path, five, capsys)
        assert code == 0
        assert report["subvolume"] == pytest.approx(8 * np.sqrt(3) / 27, abs=1e-8)
        assert len(report["subvolume_indices"]) == 4

    def test_json_out_matches_stdout(self, tmp_path, capsys):
        path = write_channel(tmp_path, pd.tetra_channel())
        out_file = tmp_path / "report.json"
        code = cli.main(
            ["analyze", "--in", path, "--json-out", str(out_file), *FAST_FLAGS]
        )
        assert code == 0
        stdout = capsys.readouterr().out
        assert json.loads(out_file.read_text()) == json.loads(stdout)

    def test_missing_file_is_parse_error(self, tmp_path, capsys):
        code = cli.main(["analyze", "--in", str(tmp_path / "nope.json")])
        assert code == 2

    def test_malformed_json_is_parse_error(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert cli.main(["analyze", "--in", str(path)]) == 2

    def test_invalid_channel_is_validation_error(self, tmp_path, capsys):
        bad = np.eye(4, dtype=complex)
        bad[0, 1] = bad[1, 0] = 2.0
        path = tmp_path / "invalid.json"
        rows = [[[z.real, z.imag] for z in row] for row in bad.tolist()]
        path.write_text(json.dumps({"n": 4, "d": rows}))
        code = cli.main(["analyze", "--in", str(path)])
        assert code == 3
        report = json.loads(capsys.readouterr().out)
        assert report["accepted"] is False
        assert report["problems"]


class TestFigure2:
    def test_schema_determinism_and_sidecar(self, tmp_path):
        out_a = tmp_path / "a.csv"
        out_b = tmp_path / "b.csv"
        args = ["figure2", "--count", "8", "--seed", "21", "--points", "9", *FAST_FLAGS]
        assert cli.main([*args, "--out", str(out_a)]) == 0
        assert cli.main([*args, "--out", str(out_b)]) == 0
        assert out_a.read_bytes() == out_b.read_bytes()

        header, rows = read_rows(out_a)
        assert header == ["index", "seed", "rank", "v_b", "purity", "q_a", "e_a_lower", "converged"]
        assert len(rows) == 8
        assert all(r["rank"] == "2" for r in rows)
        assert [r["index"] for r in rows] == [str(i) for i in range(8)]

        curve = tmp_path / "a_mcmq.csv"
        assert curve.exists()
        cheader, crows = read_rows(curve)
        assert cheader == ["alpha", "v_b", "purity", "q_a"]
        assert len(crows) == 9

    def test_seed_required(self, capsys):
        assert cli.main(["figure2", "--count", "2", "--out", "x.csv"]) == 2
        assert "seed" in capsys.readouterr().err

    def test_parallel_matches_serial(self, tmp_path):
        base = ["figure2", "--count", "6", "--seed", "5", "--points", "5", "--restarts", "3"]
        serial = tmp_path / "serial.csv"
        parallel = tmp_path / "parallel.csv"
        assert cli.main([*base, "--threads", "1", "--out", str(serial)]) == 0
        assert cli.main([*base, "--threads", "2", "--out", str(parallel)]) == 0
        assert serial.read_bytes() == parallel.read_bytes()


class TestFigure3:
    def test_rank_blocks_and_determinism(self, tmp_path):
        out = tmp_path / "f3.csv"
        args = [
            "figure3", "--count2", "3", "--count3", "3", "--count4", "2",
            "--seed", "9", "--points", "5", "--restarts", "3", "--out", str(out),
        ]
        assert cli.main(args) == 0
        header, rows = read_rows(out)
        assert [r["rank"] for r in rows] == ["2"] * 3 + ["3"] * 3 + ["4"] * 2
        assert [r["index"] for r in rows] == [str(i) for i in range(8)]
        # rank-2 purity floor from the barycenter relation
        for r in rows[:3]:
            assert float(r["purity"]) >= 0.5 - 1e-9


class TestMcmqCurve:
    def test_closed_forms_and_endpoints(self, tmp_path):
        out = tmp_path / "curve.csv"
        assert cli.main(["mcmq-curve", "--points", "9", "--restarts", "8", "--out", str(out)]) == 0
        _, rows = read_rows(out)
        assert len(rows) == 9

        alphas = np.array([float(r["alpha"]) for r in rows])
        vols = np.array([float(r["v_b"]) for r in rows])
        purities = np.array([float(r["purity"]) for r in rows])
        qas = np.array([float(r["q_a"]) for r in rows])

        # CSV carries 12 significant digits, so round-trip comparisons are
        # limited to ~1e-11 relative; the full-precision closed-form checks
        # live in the library tests
        assert alphas[0] == 0.0
        assert alphas[-1] == pytest.approx(pd.TETRAHEDRAL_ANGLE, abs=1e-11)
        closed_v = np.sqrt(3) / 4 * np.sin(alphas) ** 2 * (1 - np.cos(alphas))
        closed_p = 0.5 * (1 + ((1 + 3 * np.cos(alphas)) / 4) ** 2)
        assert np.max(np.abs(vols - closed_v)) < 1e-9
        assert np.max(np.abs(purities - closed_p)) < 1e-11
        assert vols[0] == 0.0 and purities[0] == 1.0 and qas[0] < 1e-6
        assert purities[-1] == pytest.approx(0.5, abs=1e-11)
        assert vols[-1] == pytest.approx(8 * np.sqrt(3) / 27, abs=1e-10)
        assert np.all(np.diff(vols) > 0)

    def test_too_few_points_rejected(self, tmp_path, capsys):
        assert cli.main(["mcmq-curve", "--points", "1", "--out", str(tmp_path / "c.csv")]) == 2


class TestLambdaSweep:
    def test_endpoints_and_decay(self, tmp_path):
        out = tmp_path / "sweep.csv"
        args = ["lambda-sweep", "--points", "5", "--seed", "2", "--restarts", "8", "--out", str(out)]
        assert cli.main(args) == 0
        header, rows = read_rows(out)
        assert header == ["lambda", "v_b", "purity", "q_a"]
        first, last = rows[0], rows[-1]
        assert float(first["lambda"]) == 0.0
        assert float(first["v_b"]) == pytest.approx(8 * np.sqrt(3) / 27, abs=1e-10)
        assert float(first["purity"]) == pytest.approx(0.5, abs=1e-12)
        assert float(last["lambda"]) == 1.0
        assert float(last["q_a"]) < 1e-3

    def test_deterministic(self, tmp_path):
        args = ["lambda-sweep", "--points", "3", "--seed", "8", "--restarts", "3"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert cli.main([*args, "--out", str(a)]) == 0
        assert cli.main([*args, "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestConfigResolution:
    def test_config_file_supplies_defaults_and_flags_override(self, tmp_path):
        cfg_file = tmp_path / "cfg.json"
        cfg_file.write_text(json.dumps({"restarts": 3, "points": 4, "seed": 13}))
        out = tmp_path / "c.csv"
        args = [
            "mcmq-curve", "--config", str(cfg_file), "--points", "5",
            "--out", str(out), "--manifest",
        ]
        assert cli.main(args) == 0
        manifest = json.loads((tmp_path / "c.csv.manifest.json").read_text())
        assert manifest["restarts"] == 3  # from config file
        assert manifest["points"] == 5  # flag wins over config file
        assert manifest["seed"] == 13
        _, rows = read_rows(out)
        assert len(rows) == 5

    def test_manifest_written_next_to_output(self, tmp_path):
        out = tmp_path / "m.csv"
        assert cli.main(
            ["mcmq-curve", "--points", "2", "--restarts", "2", "--out", str(out), "--manifest"]
        ) == 0
        manifest = json.loads((tmp_path / "m.csv.manifest.json").read_text())
        assert manifest["command"] == "mcmq-curve"
        assert manifest["volume_tol"] == 1e-7

    def test_bad_config_file_is_parse_error(self, tmp_path, capsys):
        cfg_file = tmp_path / "cfg.json"
        cfg_file.write_text("[1, 2]")
        code = cli.main(
            ["mcmq-curve", "--config", str(cfg_file), "--out", str(tmp_path / "x.csv")]
        )
        assert code == 2

    def test_csv_number_format_uses_12_significant_digits(self, tmp_path):
        out = tmp_path / "fmt.csv"
        assert cli.main(["mcmq-curve", "--points", "3", "--restarts", "2", "--out", str(out)]) == 0
        _, rows = read_rows(out)
        # the final grid point is the tetrahedral angle with 12 significant digits
        assert rows[-1]["alpha"] == "1.91063323625"


class TestAnalyzeRoundtrip:
    def test_reanalysis_of_sampled_channel_matches_row(self, tmp_path, capsys):
        out = tmp_path / "fig.csv"
        assert (
            cli.main(["figure2", "--count", "3", "--seed", "31", "--points", "5",
                      "--restarts", "6", "--out", str(out)]) == 0
        )
        _, rows = read_rows(out)
        # re-serialize the sampled channel and analyze it independently
        rec = pd.sample_batch(3, 4, 2, base_seed=31, opt=pd.OptimizerConfig(restarts=6, seed=0))[1]
        path = write_channel(tmp_path, rec.channel)
        assert cli.main(["analyze", "--in", path, "--restarts", "6"]) == 0
        report = json.loads(capsys.readouterr().out)
        row = rows[1]
        assert report["v_b"] == pytest.approx(float(row["v_b"]), abs=1e-10)
        assert report["purity"] == pytest.approx(float(row["purity"]), abs=1e-10)
        assert report["q_a"] == pytest.approx(float(row["q_a"]), abs=0.01)
