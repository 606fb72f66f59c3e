"""End-to-end command-line interface checks."""

import json

import pytest

import kaczfact
from kaczfact.cli import main
from kaczfact.interlaced import bound_inputs, expected_error_bound
from kaczfact.systems import load_instance


def gen_args(tmp_path, scenario="S3b", m=24, n=15, k=8, seed=3):
    out = tmp_path / "inst"
    return [
        "gen", "--scenario", scenario,
        "--m", str(m), "--n", str(n), "--k", str(k),
        "--seed", str(seed), "--out-dir", str(out),
    ], out


class TestGen:
    def test_writes_instance_files(self, tmp_path, capsys):
        args, out = gen_args(tmp_path)
        assert main(args) == 0
        for name in ("U.mat", "V.mat", "y.vec", "manifest.json"):
            assert (out / name).exists()
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["scenario"] == "S3b"
        assert manifest["consistent"] is False
        assert "wrote S3b instance" in capsys.readouterr().out

    def test_defaults_to_full_preset_dimensions(self, tmp_path, capsys):
        out = tmp_path / "inst"
        assert main(["gen", "--scenario", "S1", "--out-dir", str(out), "--seed", "1"]) == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert (manifest["m"], manifest["n"], manifest["k"]) == (200, 150, 100)

    def test_invalid_dimensions_exit_2(self, tmp_path, capsys):
        args, _ = gen_args(tmp_path, scenario="S2", m=24, n=15, k=8)
        assert main(args) == 2
        assert "error:" in capsys.readouterr().err

    def test_unknown_scenario_rejected_by_parser(self, tmp_path):
        with pytest.raises(SystemExit):
            main(["gen", "--scenario", "S9", "--out-dir", str(tmp_path)])


class TestSolve:
    def run_solve(self, tmp_path, method, extra=()):
        args, out_dir = gen_args(tmp_path)
        if not (out_dir / "manifest.json").exists():
            assert main(args) == 0
        csv = tmp_path / f"{method}.csv"
        code = main([
            "solve", "--method", method, "--dir", str(out_dir),
            "--trials", "3", "--budget", "60", "--stride", "20",
            "--seed", "5", "--out", str(csv), *extra,
        ])
        return code, csv

    def test_interlaced_run_writes_all_outputs(self, tmp_path, capsys):
        code, csv = self.run_solve(tmp_path, "rek-rk")
        assert code == 0
        lines = csv.read_text().splitlines()
        assert lines[0] == "trial,iter,error_sq,flops"
        assert len(lines) == 1 + 3 * 3  # trials x recorded iterations
        summary = csv.with_name("rek-rk_summary.csv")
        assert summary.read_text().splitlines()[0] == "iter,mean_error_sq,std_error_sq,bound"
        manifest = csv.with_name("rek-rk_manifest.jsonl")
        entry = json.loads(manifest.read_text().splitlines()[0])
        assert entry["method"] == "rek-rk"
        assert entry["scenario"] == "S3b"
        assert entry["budget"] == 60
        out = capsys.readouterr().out
        assert "final mean error_sq" in out

    def test_summary_bound_column_filled_for_covered_pairing(self, tmp_path, capsys):
        code, csv = self.run_solve(tmp_path, "rek-rk")
        assert code == 0
        rows = csv.with_name("rek-rk_summary.csv").read_text().splitlines()[1:]
        inputs = bound_inputs(load_instance(tmp_path / "inst"))
        for row in rows:
            t_str, _, _, bound_str = row.split(",")
            assert float(bound_str) == expected_error_bound(inputs, "b", int(t_str))

    def test_baseline_method_runs_on_materialized_product(self, tmp_path, capsys):
        code, csv = self.run_solve(tmp_path, "regs")
        assert code == 0
        lines = csv.read_text().splitlines()
        assert len(lines) == 1 + 3 * 3
        # Baselines carry no factored bound: the column stays empty.
        rows = csv.with_name("regs_summary.csv").read_text().splitlines()[1:]
        assert all(row.endswith(",") for row in rows)
        entry = json.loads(csv.with_name("regs_manifest.jsonl").read_text())
        assert entry["scenario"] == "S3b"
        assert (entry["m"], entry["n"]) == (24, 15)

    def test_repeat_runs_are_byte_identical(self, tmp_path, capsys):
        code, first = self.run_solve(tmp_path, "rk-rk")
        assert code == 0
        first_bytes = first.read_bytes()
        code, second = self.run_solve(tmp_path, "rk-rk")
        assert code == 0
        assert second.read_bytes() == first_bytes

    def test_missing_instance_dir_exits_2(self, tmp_path, capsys):
        code = main([
            "solve", "--method", "rk-rk", "--dir", str(tmp_path / "nope"),
            "--out", str(tmp_path / "x.csv"),
        ])
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_unknown_method_rejected_by_parser(self, tmp_path):
        with pytest.raises(SystemExit):
            main(["solve", "--method", "cg", "--dir", str(tmp_path), "--out", "x.csv"])


class TestBound:
    def test_curve_matches_library_values(self, tmp_path, capsys):
        args, out_dir = gen_args(tmp_path)
        assert main(args) == 0
        capsys.readouterr()
        assert main(["bound", "--dir", str(out_dir), "--variant", "b", "--tmax", "10", "--stride", "3"]) == 0
        out = capsys.readouterr().out
        lines = out.splitlines()
        header = [line for line in lines if line.startswith("#")]
        assert len(header) == 6
        table = lines[len(header):]
        assert table[0] == "t,bound"
        inputs = bound_inputs(load_instance(out_dir))
        ts = [int(row.split(",")[0]) for row in table[1:]]
        assert ts == [0, 3, 6, 9, 10]
        for row in table[1:]:
            t_str, value = row.split(",")
            assert float(value) == expected_error_bound(inputs, "b", int(t_str))

    def test_write_to_file(self, tmp_path, capsys):
        args, out_dir = gen_args(tmp_path)
        assert main(args) == 0
        target = tmp_path / "curve.csv"
        assert main(["bound", "--dir", str(out_dir), "--variant", "a", "--tmax", "5", "--out", str(target)]) == 0
        assert target.read_text().splitlines()[6] == "t,bound"

    def test_negative_tmax_exits_2(self, tmp_path, capsys):
        args, out_dir = gen_args(tmp_path)
        assert main(args) == 0
        assert main(["bound", "--dir", str(out_dir), "--variant", "a", "--tmax", "-1"]) == 2

    def test_bad_variant_rejected_by_parser(self, tmp_path):
        with pytest.raises(SystemExit):
            main(["bound", "--dir", str(tmp_path), "--variant", "c", "--tmax", "5"])


class TestVersion:
    def test_prints_package_version(self, capsys):
        assert main(["version"]) == 0
        assert capsys.readouterr().out.strip() == kaczfact.__version__

    def test_console_script_is_installed(self):
        import shutil
        import subprocess

        exe = shutil.which("kaczfact")
        if exe is None:
            pytest.skip("console script not on PATH")
        proc = subprocess.run([exe, "version"], capture_output=True, text=True)
        assert proc.returncode == 0
        assert proc.stdout.strip() == kaczfact.__version__


class TestArgumentParsing:
    def test_no_command_exits_with_usage(self):
        with pytest.raises(SystemExit):
            main([])
