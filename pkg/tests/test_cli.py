import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from eamchain import ToyFamilyParams, coefficients, make_toy_potentials
from eamchain.cli import build_parser, main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCheck:
    def test_default_family_passes(self, capsys):
        code, out, _ = run(["check", "--alpha", "4", "--beta", "3", "--c", "1", "--F", "1.0", "--N", "16"], capsys)
        assert code == 0
        data = json.loads(out)
        assert data["all_passed"] and all(ch["passed"] for ch in data["checks"])
        names = {ch["name"] for ch in data["checks"]}
        assert {"assumption_signs", "condition1", "compare_volume", "compare_recon", "counterexample"} <= names

    def test_failed_sign_pattern_exits_one(self, capsys):
        code, out, _ = run(["check", "--F", "0.5", "--N", "8"], capsys)
        assert code == 1
        assert not json.loads(out)["all_passed"]

    def test_counterexample_exercised(self, capsys):
        code, out, _ = run(["check", "--alpha", "8", "--F", "1", "--N", "8"], capsys)
        cx = [ch for ch in json.loads(out)["checks"] if ch["name"] == "counterexample"][0]
        assert code == 0 and not cx["skipped"] and cx["passed"]


class TestSpectrum:
    def test_volume_is_flat(self, capsys):
        code, out, _ = run(["spectrum", "--model", "volume", "--N", "8", "--F", "1.0"], capsys)
        assert code == 0
        data = json.loads(out)
        A = coefficients(make_toy_potentials(ToyFamilyParams()), 1.0).A
        assert len(data["numeric"]) == 15
        np.testing.assert_allclose(data["numeric"], A, atol=1e-10)

    def test_csv(self, capsys):
        code, out, _ = run(["spectrum", "--N", "4", "--format", "csv"], capsys)
        rows = list(csv.reader(io.StringIO(out)))
        assert code == 0 and rows[0] == ["k", "s_k", "analytic", "numeric"] and len(rows) == 8


class TestSweep:
    def test_row_count(self, capsys):
        code, out, _ = run(["sweep", "--F-min", "0.9", "--F-max", "1.4", "--steps", "50"], capsys)
        lines = out.splitlines()
        assert code == 0 and len(lines) == 52
        assert lines[0].startswith("F,lam_a,lam_cv,lam_cr")

    def test_scientific_notation(self, capsys):
        code, out, _ = run(["sweep", "--F-min", "9e-1", "--F-max", "1.0e0", "--steps", "1e1", "--N", "1.6e1"], capsys)
        assert code == 0 and len(out.splitlines()) == 12

    def test_deterministic_files(self, tmp_path):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for path in paths:
            assert main(["sweep", "--steps", "20", "--workers", "3", "--output", str(path)]) == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()


class TestCritical:
    def test_all_models(self, capsys):
        code, out, _ = run(["critical", "--tol", "1e-10"], capsys)
        reports = json.loads(out)["critical"]
        assert code == 0 and [r["model"] for r in reports] == ["atomistic", "volume", "reconstruction"]
        assert all(r["iterations"] <= 50 for r in reports)

    def test_missing_bracket_exits_one(self, capsys):
        code, out, _ = run(["critical", "--model", "a", "--F-min", "0.9", "--F-max", "1.0", "--steps", "5"], capsys)
        assert code == 1 and json.loads(out)["no_bracket"] == ["atomistic"]

    def test_csv(self, capsys):
        code, out, _ = run(["critical", "--model", "cr", "--format", "csv"], capsys)
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and rows[0]["model"] == "reconstruction"


class TestSolve:
    def loads(self, tmp_path, N, amp):
        ell = np.arange(-N + 1, N + 1)
        path = tmp_path / "loads.csv"
        path.write_text("".join(f"{v:.17g}\n" for v in amp * np.sin(np.pi * ell / N)))
        return path

    def test_converges(self, tmp_path, capsys):
        path = self.loads(tmp_path, 8, 0.3)
        code, out, _ = run(["solve", "--loads", str(path), "--format", "json"], capsys)
        data = json.loads(out)
        assert code == 0 and data["converged"] and data["residuals"][-1] <= 1e-10
        assert len(data["y"]) == 16

    def test_unstable_strain_exits_one(self, tmp_path, capsys):
        path = self.loads(tmp_path, 8, 1e-3)
        code, _, err = run(["solve", "--loads", str(path), "--F", "1.3"], capsys)
        assert code == 1 and "eamchain solve" in err

    def test_odd_load_count(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text("1\n2\n3\n")
        assert run(["solve", "--loads", str(path)], capsys)[0] == 2


class TestUsage:
    @pytest.mark.parametrize(
        "argv",
        [[], ["frobnicate"], ["sweep", "--N", "0"], ["sweep", "--F-min", "-1"], ["critical", "--tol", "0"],
         ["spectrum", "--model", "qnl"], ["sweep", "--F-min", "1.2", "--F-max", "1.1"], ["solve"]],
    )
    def test_exit_two(self, argv, capsys):
        assert run(argv, capsys)[0] == 2

    def test_domain_violation_is_usage_error(self, capsys):
        assert run(["spectrum", "--rho-floor", "10"], capsys)[0] == 2

    @pytest.mark.parametrize("command", ["spectrum", "sweep", "critical", "check", "solve"])
    def test_help_lists_defaults(self, command, capsys):
        assert main([command, "--help"]) == 0
        text = capsys.readouterr().out
        parser, subs = build_parser()
        for action in subs[command]._actions:
            if action.option_strings and action.dest != "help":
                assert action.option_strings[0] in text
        assert text.count("(default:") >= len(subs[command]._actions) - 1


class TestConfig:
    def test_file_values_and_override(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# sweep settings\nalpha = 1\nF-min = 0.9\nF_max=1.0\nsteps=4\n")
        code, out, _ = run(["sweep", "--config", str(cfg), "--steps", "2"], capsys)
        lines = out.splitlines()
        assert code == 0 and len(lines) == 4
        assert float(lines[1].split(",")[0]) == 0.9
        ref = make_toy_potentials(ToyFamilyParams(alpha=1.0))
        assert float(lines[1].split(",")[2]) == pytest.approx(coefficients(ref, 0.9).A, rel=1e-15)

    def test_unknown_key(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("gamma = 1\n")
        assert run(["sweep", "--config", str(cfg)], capsys)[0] == 2

    def test_missing_file(self, tmp_path, capsys):
        assert run(["sweep", "--config", str(tmp_path / "nope")], capsys)[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "eamchain", "spectrum", "--model", "volume", "--N", "2", "--format", "csv"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and len(proc.stdout.splitlines()) == 4
