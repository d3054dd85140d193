"""Command-line behaviour: config merging and output routing, plus the
exit-code contract.

A few tests go through a real subprocess to pin down the installed entry
point and the process exit status; the rest call main() in-process to keep
the suite quick.
"""
import json
import subprocess
import sys

import pytest

from logitgof.cli import main

RUN = [sys.executable, "-m", "logitgof.cli"]
TINY = ["--dataset", "finney", "--dependent", "response",
        "--statistics", "deviance", "--num-simulations", "200"]


def write_all_ones_csv(tmp_path):
    p = tmp_path / "ones.csv"
    rows = "".join(f"1,{v / 10}\n" for v in range(12))
    p.write_text("y,a\n" + rows, encoding="utf-8")
    return p


class TestSubprocess:
    def test_successful_run(self):
        res = subprocess.run(RUN + TINY, capture_output=True, text=True)
        assert res.returncode == 0
        assert "deviance" in res.stdout
        assert "statistic" in res.stdout

    def test_unknown_flag_exits_1(self):
        res = subprocess.run(RUN + TINY + ["--frobnicate"], capture_output=True, text=True)
        assert res.returncode == 1
        assert "error" in res.stderr

    def test_missing_data_file_exits_2(self, tmp_path):
        res = subprocess.run(
            RUN + ["--dataset", str(tmp_path / "absent.csv"), "--dependent", "y",
                   "--statistics", "deviance", "--num-simulations", "5"],
            capture_output=True, text=True,
        )
        assert res.returncode == 2
        assert "no such file" in res.stderr

    def test_degenerate_fit_exits_3(self, tmp_path):
        p = write_all_ones_csv(tmp_path)
        res = subprocess.run(
            RUN + ["--dataset", str(p), "--dependent", "y",
                   "--statistics", "deviance", "--num-simulations", "5"],
            capture_output=True, text=True,
        )
        assert res.returncode == 3
        assert "did not converge" in res.stderr


class TestInProcess:
    def test_json_format_parses(self, capsysbinary):
        assert main(TINY + ["--format", "json", "--master-seed", "3"]) == 0
        doc = json.loads(capsysbinary.readouterr().out)
        assert doc["dataset"] == "finney"
        assert doc["num_simulations"] == 200
        assert doc["statistics"][0]["statistic"] == "deviance"
        assert 0.0 <= doc["statistics"][0]["p_hat"] <= 1.0

    def test_output_flag_writes_the_file(self, tmp_path, capsysbinary):
        out = tmp_path / "report.csv"
        code = main(TINY + ["--format", "csv", "--output", str(out)])
        assert code == 0
        assert capsysbinary.readouterr().out == b""
        assert out.read_text(encoding="utf-8").startswith("statistic,")

    def test_flags_override_config_keys(self, tmp_path, capsysbinary):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({
            "dataset": "finney",
            "dependent": "response",
            "statistics": ["deviance"],
            "num_simulations": 50,
            "master_seed": 1,
        }), encoding="utf-8")
        code = main(["--config", str(cfg), "--num-simulations", "25",
                     "--format", "json"])
        assert code == 0
        doc = json.loads(capsysbinary.readouterr().out)
        assert doc["num_simulations"] == 25
        assert doc["master_seed"] == 1

    def test_unknown_statistic_label(self, capsysbinary):
        code = main(["--dataset", "finney", "--dependent", "response",
                     "--statistics", "anderson", "--num-simulations", "5"])
        assert code == 1
        assert b"anderson" in capsysbinary.readouterr().err

    def test_missing_required_keys(self, capsysbinary):
        code = main(["--statistics", "deviance"])
        assert code == 1
        assert b"dataset" in capsysbinary.readouterr().err

    def test_non_binary_dependent_exits_2(self, tmp_path, capsysbinary):
        p = tmp_path / "bad.csv"
        p.write_text("y,a\n1,0.5\n2,0.7\n", encoding="utf-8")
        code = main(["--dataset", str(p), "--dependent", "y",
                     "--statistics", "deviance", "--num-simulations", "5"])
        assert code == 2
        assert b"not 0 or 1" in capsysbinary.readouterr().err

    def test_worker_count_does_not_change_json_bytes(self, capsysbinary):
        args = TINY + ["--format", "json", "--master-seed", "9"]
        assert main(args + ["--workers", "1"]) == 0
        serial = capsysbinary.readouterr().out
        assert main(args + ["--workers", "3"]) == 0
        threaded = capsysbinary.readouterr().out
        assert serial == threaded

    def test_progress_goes_to_stderr(self, capsysbinary):
        assert main(TINY + ["--progress"]) == 0
        err = capsysbinary.readouterr().err
        assert b"200/200 simulations" in err

    def test_bad_config_file(self, tmp_path, capsysbinary):
        cfg = tmp_path / "broken.json"
        cfg.write_text("{oops", encoding="utf-8")
        assert main(["--config", str(cfg)]) == 1
        assert b"not valid JSON" in capsysbinary.readouterr().err
