"""CLI surface: subcommands, exit codes, deterministic serialization."""

import json
import subprocess
import sys

import pytest

from balltrace.cli import run


def invoke(args, capsys):
    code = run(args)
    out = capsys.readouterr().out
    return code, out


class TestExitCodes:
    def test_identities_pass(self, capsys):
        code, out = invoke(["verify", "identities", "--order", "all"], capsys)
        assert code == 0
        assert "overall: PASS" in out

    def test_verification_failure_exits_1(self, capsys):
        # an unreachable tolerance forces a fail; the failing report prints
        code, out = invoke(["verify", "trace", "--order", "4", "--dim", "5",
                            "--tau", "0.2", "--tolerance", "1e-20"], capsys)
        assert code == 1
        assert "FAIL" in out

    def test_usage_error_exits_2(self):
        proc = subprocess.run(
            [sys.executable, "-m", "balltrace.cli", "verify", "trace"],
            capture_output=True, text=True)
        assert proc.returncode == 2

    def test_module_entrypoint(self):
        proc = subprocess.run(
            [sys.executable, "-m", "balltrace.cli", "verify", "halfspace",
             "--order", "6", "--lambda", "1/3"],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert "8/3" in proc.stdout


class TestReports:
    def test_trace_json(self, capsys, tmp_path):
        out_path = tmp_path / "report.json"
        code = run(["--output", str(out_path), "--format", "json",
                    "verify", "trace", "--order", "4", "--dim", "5",
                    "--tau", "0.2"])
        assert code == 0
        payload = json.loads(out_path.read_text())
        assert payload["pass"] is True
        assert payload["tool_version"]
        rep = payload["reports"][0]
        assert rep["theorem"] == "trace-order-4"
        assert rep["pass"] is True

    def test_json_deterministic(self, tmp_path):
        paths = [tmp_path / "a.json", tmp_path / "b.json"]
        for p in paths:
            code = run(["--output", str(p), "--format", "json",
                        "verify", "lm", "--order", "6", "--tau", "0.3"])
            assert code == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_csv_output(self, capsys):
        code, out = invoke(["--format", "csv", "verify", "beckner",
                            "--order", "2", "--dim", "3", "--s", "1/2",
                            "--tau", "0.2"], capsys)
        assert code == 0
        header = out.splitlines()[0]
        assert header.startswith("theorem,order,dimension")

    def test_trace_with_perturbation(self, capsys):
        code, out = invoke(["verify", "trace", "--order", "4", "--dim", "5",
                            "--tau", "0.2", "--perturb", "2:0.05"], capsys)
        assert code == 0
        assert "perturbed" in out

    def test_halfspace_lambda_flag(self, capsys):
        code, out = invoke(["verify", "halfspace", "--order", "6",
                            "--lambda", "1/3"], capsys)
        assert code == 0
        assert "energy=8/3" in out

    def test_weighted(self, capsys):
        code, out = invoke(["verify", "weighted", "--dim", "3", "--s", "1/2",
                            "--tau", "0.2"], capsys)
        assert code == 0

    def test_sphere(self, capsys):
        code, out = invoke(["verify", "sphere", "--dim", "5", "--gamma",
                            "3/2", "--tau", "0.2"], capsys)
        assert code == 0

    def test_tables_coeffs_order6_dim7(self, capsys):
        code, out = invoke(["verify", "identities", "--order", "6"], capsys)
        assert code == 0
        code, out = invoke(["tables", "coeffs", "--order", "6", "--dim", "7"],
                           capsys)
        assert code == 0
        for val in ("80/9", "944/9", "2720/9"):
            assert val in out

    def test_conformal_small_sample(self, capsys):
        code, out = invoke(["verify", "conformal", "--dim", "3", "--k", "1",
                            "--samples", "8"], capsys)
        assert code == 0
        assert "conformal-orthogonality" in out
