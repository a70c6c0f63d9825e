"""Command-line interface: exit codes, golden output, file exports."""

import csv
import json
import subprocess
import sys

import pytest

from hhlax.cli import main
from hhlax.model import potential


def run_cli(*args, capsys):
    code = main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_subprocess(*args):
    return subprocess.run(
        [sys.executable, "-m", "hhlax", *args], capture_output=True, text=True
    )


class TestVerifyCommand:
    def test_all_checks_pass_golden(self, capsys, golden_dir):
        code, out, _ = run_cli("verify", capsys=capsys)
        assert code == 0
        assert out == (golden_dir / "verify.txt").read_text()

    def test_output_is_byte_stable(self, capsys):
        _, first, _ = run_cli("verify", capsys=capsys)
        _, second, _ = run_cli("verify", capsys=capsys)
        assert first == second

    def test_filter_frobenius_golden(self, capsys, golden_dir):
        code, out, _ = run_cli("verify", "--filter", "frobenius", capsys=capsys)
        assert code == 0
        assert out == (golden_dir / "verify_frobenius.txt").read_text()
        assert "-t1 - 3*t2^2" in out

    def test_filter_matching_nothing(self, capsys):
        code, _, err = run_cli("verify", "--filter", "nonsense", capsys=capsys)
        assert code == 2
        assert "no checks match" in err

    def test_subprocess_exit_code(self):
        result = run_subprocess("verify")
        assert result.returncode == 0
        assert "7/7 checks passed" in result.stdout


class TestPotentialCommand:
    def test_k3_golden(self, capsys, golden_dir):
        code, out, _ = run_cli("potential", "--k", "3", capsys=capsys)
        assert code == 0
        assert out == (golden_dir / "potential_k3.txt").read_text()

    def test_k0(self, capsys):
        code, out, _ = run_cli("potential", "--k", "0", capsys=capsys)
        assert code == 0
        assert out == "v1 = 0\nv2 = 1\n"

    def test_k4_matches_model_rendering(self, capsys):
        code, out, _ = run_cli("potential", "--k", "4", capsys=capsys)
        pair = potential(4)
        assert code == 0
        assert out == f"v1 = {pair.v1}\nv2 = {pair.v2}\n"

    def test_negative_k(self, capsys):
        code, out, _ = run_cli("potential", "--k", "-1", capsys=capsys)
        assert code == 0
        assert out == "v1 = 4*x2^-2\nv2 = -4*x1*x2^-2\n"

    def test_out_of_range_k(self, capsys):
        code, _, err = run_cli("potential", "--k", "65", capsys=capsys)
        assert code == 2
        assert "out of range" in err


class TestSimulateCommand:
    def test_zero_duration_single_row(self, tmp_path, capsys, golden_dir):
        out_file = tmp_path / "zero.csv"
        code, out, _ = run_cli(
            "simulate", "--flow", "t1", "--duration", "0", "--state", "1,1,0,0",
            "--out", str(out_file), capsys=capsys,
        )
        assert code == 0
        assert out_file.read_text() == (golden_dir / "trajectory_zero.csv").read_text()
        assert "samples = 1" in out

    def test_default_run_conserves(self, tmp_path, capsys):
        out_file = tmp_path / "run.csv"
        code, out, _ = run_cli(
            "simulate", "--flow", "t1", "--duration", "2", "--state", "1,1,0,0",
            "--out", str(out_file), capsys=capsys,
        )
        assert code == 0
        summary = {
            line.split(" = ")[0]: line.split(" = ")[1]
            for line in out.splitlines()
            if " = " in line
        }
        assert float(summary["h1 drift"]) < 1e-9
        assert float(summary["h2 drift"]) < 1e-9
        assert float(summary["eigenvalue drift"]) < 1e-8
        with open(out_file) as stream:
            rows = list(csv.reader(stream))
        assert rows[0][:9] == ["s", "t1", "t2", "x1", "x2", "p1", "p2", "h1", "h2"]
        assert len(rows) > 2

    def test_json_format(self, tmp_path, capsys):
        out_file = tmp_path / "run.json"
        code, _, _ = run_cli(
            "simulate", "--flow", "t2", "--duration", "0.5", "--state", "1,1,0,0",
            "--out", str(out_file), "--format", "json", capsys=capsys,
        )
        assert code == 0
        payload = json.loads(out_file.read_text())
        assert payload["columns"][0] == "s"
        assert payload["summary"]["h1_drift"] < 1e-9

    def test_svg_output(self, tmp_path, capsys):
        out_file, svg_file = tmp_path / "run.csv", tmp_path / "run.svg"
        code, _, _ = run_cli(
            "simulate", "--flow", "t1", "--duration", "0.5", "--state", "1,1,0,0",
            "--out", str(out_file), "--svg", str(svg_file), capsys=capsys,
        )
        assert code == 0
        content = svg_file.read_text()
        assert content.startswith("<svg") and "polyline" in content

    def test_deformed_flow(self, tmp_path, capsys):
        out_file = tmp_path / "deformed.csv"
        code, _, _ = run_cli(
            "simulate", "--flow", "t1", "--deformed", "true", "--duration", "0.3",
            "--state", "1,1,0,0", "--out", str(out_file), capsys=capsys,
        )
        assert code == 0
        with open(out_file) as stream:
            rows = list(csv.reader(stream))
        assert float(rows[-1][1]) == pytest.approx(0.3)  # t1 column tracks the flow

    def test_malformed_state(self, capsys, tmp_path):
        code, _, err = run_cli(
            "simulate", "--flow", "t1", "--duration", "1", "--state", "1,1,0",
            "--out", str(tmp_path / "x.csv"), capsys=capsys,
        )
        assert code == 2
        assert "state" in err

    def test_singular_run_exits_3(self, tmp_path):
        result = run_subprocess(
            "simulate", "--flow", "t1", "--duration", "1", "--state", "1,0.5,0,-1",
            "--alpha", "-0.1", "--out", str(tmp_path / "sing.csv"),
        )
        assert result.returncode == 3
        assert "integration aborted" in result.stderr


class TestPfaffianCommand:
    def test_rectangle_paths_agree(self, tmp_path, capsys):
        files = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for waypoints, out_file in zip(
            ["0,0;0.5,0;0.5,0.5", "0,0;0,0.5;0.5,0.5"], files
        ):
            code, _, _ = run_cli(
                "pfaffian", "--waypoints", waypoints, "--state", "1,1,0,0",
                "--out", str(out_file), capsys=capsys,
            )
            assert code == 0
        endpoints = []
        for out_file in files:
            with open(out_file) as stream:
                last = list(csv.reader(stream))[-1]
            endpoints.append([float(value) for value in last[3:7]])
        for a, b in zip(*endpoints):
            assert a == pytest.approx(b, abs=1e-7)

    def test_bad_waypoints(self, capsys, tmp_path):
        code, _, err = run_cli(
            "pfaffian", "--waypoints", "0,0", "--state", "1,1,0,0",
            "--out", str(tmp_path / "x.csv"), capsys=capsys,
        )
        assert code == 2


class TestSpectralCommand:
    def test_zero_state(self, capsys):
        code, out, _ = run_cli(
            "spectral", "--state", "0,0,0,0", "--lambdas", "1", capsys=capsys
        )
        assert code == 0
        assert "lambda^5: 2" in out
        assert "1.41421356237j" in out

    def test_pairs_sum_to_zero(self, capsys):
        code, out, _ = run_cli(
            "spectral", "--state", "1,1,0,0", "--lambdas", "1", capsys=capsys
        )
        assert code == 0
        line = [l for l in out.splitlines() if l.strip().startswith("lambda = 1")][0]
        # real eigenvalue pair +-sqrt(1.625) at this state
        assert "lambda = 1: 1.2747548784+0j, -1.2747548784-0j" in line

    def test_malformed_state(self, capsys):
        code, _, err = run_cli("spectral", "--state", "a,b,c,d", capsys=capsys)
        assert code == 2


class TestUsage:
    def test_no_command(self):
        result = run_subprocess()
        assert result.returncode == 2

    def test_unknown_command(self):
        result = run_subprocess("frobnicate")
        assert result.returncode == 2

    def test_help_exits_zero(self):
        result = run_subprocess("--help")
        assert result.returncode == 0
        assert "verify" in result.stdout
