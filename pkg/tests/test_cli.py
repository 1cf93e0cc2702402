import csv
import json
import math
import subprocess
import sys

import pytest

from smoothkit import cli


def _read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def _config(tmp_path, payload, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


SMALL_VERIFY = {
    "corpus": [{"kind": "random_trig", "degree": 1 + j % 3, "seed": 50 + j} for j in range(12)],
    "suites": [{"name": "lemma1", "case_count": 4, "k_range": [1, 2], "h_grid_size": 2}],
}


class TestConstants:
    def test_csv_table(self, tmp_path, capsys):
        assert cli.main(["constants", "--k", "1..3", "--out", str(tmp_path)]) == 0
        rows = _read_csv(tmp_path / "constants.csv")
        assert [r["k"] for r in rows] == ["1", "2", "3"]
        assert float(rows[0]["b0"]) == 1.0
        assert float(rows[0]["K_2k"]) == pytest.approx(math.pi**2 / 8, abs=1e-14)
        assert all(float(r["lambda_l1"]) <= 2.0 for r in rows)
        assert "constants.csv" in capsys.readouterr().out

    def test_json_table(self, tmp_path):
        assert cli.main(["constants", "--k", "2", "--format", "json", "--out", str(tmp_path)]) == 0
        payload = json.loads((tmp_path / "constants.json").read_text())
        assert len(payload) == 1 and payload[0]["k"] == 2
        assert payload[0]["lambda_l1"] == pytest.approx(53.0 / 45.0, rel=1e-15)

    def test_bad_range_is_usage_error(self, tmp_path):
        assert cli.main(["constants", "--k", "5..2", "--out", str(tmp_path)]) == 2
        assert cli.main(["constants", "--k", "zero", "--out", str(tmp_path)]) == 2


class TestKernel:
    def test_vertex_table_and_samples(self, tmp_path, capsys):
        code = cli.main(["kernel", "--k", "2", "--h", "0.5", "--out", str(tmp_path)])
        assert code == 0
        rows = _read_csv(tmp_path / "kernel_vertices.csv")
        assert rows[0]["numerator"].lstrip("-").isdigit()
        assert (tmp_path / "kernel_samples.csv").exists()
        out = capsys.readouterr().out
        line = next(l for l in out.splitlines() if l.startswith("abs_integral="))
        assert float(line.split("=")[1]) == pytest.approx(53.0 / 45.0, rel=1e-12)


class TestPointwiseCommands:
    def test_w_single_row(self, tmp_path):
        assert cli.main(["w", "--fn", "cos:2", "--k", "1", "--h", "0.7", "--out", str(tmp_path)]) == 0
        row = _read_csv(tmp_path / "w.csv")[0]
        assert float(row["w_norm"]) > 0.0
        assert float(row["w_star"]) >= float(row["w_norm"]) - 1e-12

    def test_w_grid_profile(self, tmp_path):
        assert cli.main(["w", "--fn", "random:4:9", "--k", "2", "--grid", "4", "--out", str(tmp_path)]) == 0
        rows = _read_csv(tmp_path / "w_profile.csv")
        assert len(rows) == 4
        stars = [float(r["w_star"]) for r in rows]
        assert stars == sorted(stars)

    def test_w_rejects_out_of_range_width(self, tmp_path):
        assert cli.main(["w", "--fn", "cos:2", "--k", "2", "--h", "2.0", "--out", str(tmp_path)]) == 2

    def test_omega_default_and_profile(self, tmp_path):
        assert cli.main(["omega", "--fn", "step:3", "--r", "2", "--delta", str(math.pi / 3), "--out", str(tmp_path)]) == 0
        row = _read_csv(tmp_path / "omega.csv")[0]
        assert float(row["omega"]) == pytest.approx(4.0, abs=1e-9)
        assert cli.main(["omega", "--fn", "sin:1", "--r", "1", "--grid", "5", "--out", str(tmp_path)]) == 0
        assert len(_read_csv(tmp_path / "omega_profile.csv")) == 5

    def test_bestapprox_pure_harmonic(self, tmp_path):
        assert cli.main(["bestapprox", "--fn", "cos:4", "--degree", "3", "--out", str(tmp_path)]) == 0
        row = _read_csv(tmp_path / "bestapprox.csv")[0]
        assert float(row["error"]) == pytest.approx(1.0, abs=1e-6)
        assert float(row["bracket_low"]) <= float(row["error"]) <= float(row["bracket_high"])

    def test_bad_function_spec(self, tmp_path):
        assert cli.main(["omega", "--fn", "noise:3", "--out", str(tmp_path)]) == 2
        assert cli.main(["omega", "--fn", "smooth:nosuch", "--out", str(tmp_path)]) == 2


class TestVerify:
    def test_small_budget_run(self, tmp_path, capsys):
        cfg = _config(tmp_path, SMALL_VERIFY)
        out = tmp_path / "run"
        code = cli.main(["verify", "--suite", "lemma1", "--config", cfg, "--out", str(out)])
        assert code == 0
        rows = _read_csv(out / "lemma1.csv")
        assert len(rows) == 16
        assert all(r["pass"] == "True" for r in rows)
        assert rows[0]["suite"] == "lemma1"
        assert (out / "summary.txt").read_text().startswith("lemma1: rows=16 failures=0")
        stdout = capsys.readouterr().out
        assert "lemma1: 16 rows, pass" in stdout

    def test_repeat_runs_byte_identical(self, tmp_path):
        cfg = _config(tmp_path, SMALL_VERIFY)
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            assert cli.main(["verify", "--suite", "lemma1", "--config", cfg, "--seed", "3", "--out", str(out)]) == 0
            outs.append((out / "lemma1.csv").read_bytes())
        assert outs[0] == outs[1]

    def test_config_supplies_suite_list(self, tmp_path):
        cfg = _config(tmp_path, SMALL_VERIFY)
        out = tmp_path / "fromcfg"
        assert cli.main(["verify", "--config", cfg, "--out", str(out)]) == 0
        assert (out / "lemma1.csv").exists()
        assert not (out / "prop21.csv").exists()

    def test_json_format(self, tmp_path):
        cfg = _config(tmp_path, SMALL_VERIFY)
        out = tmp_path / "json"
        assert cli.main(["verify", "--suite", "lemma1", "--config", cfg, "--format", "json", "--out", str(out)]) == 0
        payload = json.loads((out / "lemma1.json").read_text())
        assert len(payload) == 16
        assert all(rec["pass"] is True for rec in payload)
        assert {"suite", "case_id", "lhs", "rhs", "margin"} <= set(payload[0])

    def test_unknown_suite(self, tmp_path):
        assert cli.main(["verify", "--suite", "nosuch", "--out", str(tmp_path / "x")]) == 2

    def test_unknown_config_key(self, tmp_path):
        cfg = _config(tmp_path, {"suite_list": ["lemma1"]})
        assert cli.main(["verify", "--suite", "lemma1", "--config", cfg, "--out", str(tmp_path / "x")]) == 2

    def test_flag_overrides_shrink_sweep(self, tmp_path):
        cfg = _config(tmp_path, {"corpus": SMALL_VERIFY["corpus"]})
        out = tmp_path / "flags"
        code = cli.main(
            ["verify", "--suite", "lemma1", "--config", cfg, "--k", "1", "--cases", "2", "--out", str(out)]
        )
        assert code == 0
        rows = _read_csv(out / "lemma1.csv")
        assert {r["k"] for r in rows} == {"1"}
        assert len({r["case_id"] for r in rows}) == 2

    def test_bad_tolerance_in_config(self, tmp_path):
        payload = dict(SMALL_VERIFY)
        payload["tolerances"] = {"lemma1": -1.0}
        cfg = _config(tmp_path, payload)
        assert cli.main(["verify", "--suite", "lemma1", "--config", cfg, "--out", str(tmp_path / "x")]) == 2


class TestReport:
    def test_named_figure_with_data_file(self, tmp_path):
        out = tmp_path / "report"
        assert cli.main(["report", "--figures", "spline_convergence", "--out", str(out)]) == 0
        assert (out / "spline_convergence.csv").exists()
        assert (out / "spline_convergence.png").exists()

    def test_unknown_figure(self, tmp_path):
        assert cli.main(["report", "--figures", "pie_chart", "--out", str(tmp_path / "x")]) == 2


class TestParsing:
    def test_int_range_forms(self):
        assert cli.parse_int_range("3") == (3,)
        assert cli.parse_int_range("2..5") == (2, 3, 4, 5)
        assert cli.parse_int_range("1,4,6") == (1, 4, 6)
        with pytest.raises(cli.UsageError):
            cli.parse_int_range("4..1")

    def test_float_list(self):
        assert cli.parse_float_list("1.5,2") == (1.5, 2.0)
        with pytest.raises(cli.UsageError):
            cli.parse_float_list("fast")

    def test_missing_command_is_usage(self):
        assert cli.main([]) == 2
        assert cli.main(["frobnicate"]) == 2
        assert cli.main(["--help"]) == 0


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "smoothkit", "constants", "--k", "1..2", "--out", str(tmp_path)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert (tmp_path / "constants.csv").exists()
