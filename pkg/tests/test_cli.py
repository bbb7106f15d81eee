"""End-to-end tests for the command line interface."""
import json

import numpy as np
import pytest

from betacross import cli
from betacross.spectral_stats import wigner_surmise


def run_cli(args):
    return cli.main([str(a) for a in args])


class TestDensityCommand:
    def test_kerov_table_integrates_to_one(self, tmp_path):
        out = tmp_path / "rho_c2.csv"
        code = run_cli(["density", "--kind", "kerov", "--c-param", "2",
                        "--grid", "-8:8:2001", "--out", out,
                        "--out-dir", tmp_path])
        assert code == 0
        data = np.loadtxt(out, delimiter=",", skiprows=1)
        assert data.shape == (2001, 2)
        integral = np.trapezoid(data[:, 1], data[:, 0])
        assert abs(integral - 1.0) <= 1e-5
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert manifest["command"] == "density"
        assert manifest["counters"]["rows"] == 2001

    def test_default_grid_used_when_omitted(self, tmp_path):
        code = run_cli(["density", "--kind", "gaussian", "--out-dir", tmp_path])
        assert code == 0
        data = np.loadtxt(tmp_path / "density.csv", delimiter=",", skiprows=1)
        assert data.shape[0] == 2001

    def test_bad_grid_is_config_error(self, tmp_path):
        code = run_cli(["density", "--kind", "kerov", "--grid", "oops",
                        "--out-dir", tmp_path])
        assert code == 2

    def test_invalid_model_parameter_is_config_error(self, tmp_path):
        code = run_cli(["density", "--kind", "corrected", "--beta", "2.5",
                        "--out-dir", tmp_path])
        assert code == 2


class TestSimulateSde:
    args = ["simulate-sde", "--n-dim", "4", "--beta", "0.5", "--dt", "1e-3",
            "--burn-in", "1", "--samples", "5", "--stride", "0.5",
            "--seed", "7"]

    def test_writes_samples_and_manifest(self, tmp_path):
        code = run_cli(self.args + ["--out-dir", tmp_path])
        assert code == 0
        lines = (tmp_path / "samples.csv").read_text().splitlines()
        assert len(lines) == 6
        assert lines[0] == "t,lambda_1,lambda_2,lambda_3,lambda_4"
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert manifest["config"]["sigma"] == 1.0
        assert manifest["config"]["mode"] == "fixed_beta"
        assert manifest["seed"] == 7
        assert manifest["counters"]["n_samples"] == 5
        assert manifest["counters"]["macro_steps"] > 0

    def test_rerun_is_byte_identical(self, tmp_path):
        run_cli(self.args + ["--out-dir", tmp_path / "a"])
        run_cli(self.args + ["--out-dir", tmp_path / "b"])
        assert (tmp_path / "a" / "samples.csv").read_bytes() == \
            (tmp_path / "b" / "samples.csv").read_bytes()

    def test_manifest_round_trip(self, tmp_path):
        run_cli(self.args + ["--out-dir", tmp_path / "a"])
        code = run_cli(["simulate-sde", "--config",
                        tmp_path / "a" / "manifest.json",
                        "--out-dir", tmp_path / "b"])
        assert code == 0
        assert (tmp_path / "a" / "samples.csv").read_bytes() == \
            (tmp_path / "b" / "samples.csv").read_bytes()

    def test_flags_override_config_file(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text('{"n_dim": 4, "beta": 0.5, "samples": 3, "seed": 1}\n')
        code = run_cli(["simulate-sde", "--config", cfg, "--seed", "2",
                        "--burn-in", "0.5", "--out-dir", tmp_path])
        assert code == 0
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert manifest["seed"] == 2
        assert manifest["config"]["samples"] == 3

    def test_unknown_config_key_is_config_error(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text('{"bogus_knob": 1}\n')
        assert run_cli(["simulate-sde", "--config", cfg,
                        "--out-dir", tmp_path]) == 2

    def test_invalid_sde_parameters_are_config_errors(self, tmp_path):
        assert run_cli(["simulate-sde", "--n-dim", "0",
                        "--out-dir", tmp_path]) == 2
        assert run_cli(["simulate-sde", "--n-dim", "4", "--beta", "3.0",
                        "--out-dir", tmp_path]) == 2

    def test_replicas_concatenate_in_order(self, tmp_path):
        single = tmp_path / "single"
        double = tmp_path / "double"
        run_cli(self.args + ["--out-dir", single])
        code = run_cli(self.args + ["--replicas", "2", "--out-dir", double])
        assert code == 0
        lines_single = (single / "samples.csv").read_text().splitlines()
        lines_double = (double / "samples.csv").read_text().splitlines()
        assert len(lines_double) == 11
        assert lines_double[1:6] == lines_single[1:]
        manifest = json.loads((double / "manifest.json").read_text())
        assert manifest["counters"]["n_replicas"] == 2
        assert manifest["counters"]["n_samples"] == 10

    def test_switched_mode_flags(self, tmp_path):
        code = run_cli(["simulate-sde", "--mode", "switched", "--n-dim", "4",
                        "--p", "0.5", "--switch-rate", "10", "--dt", "1e-2",
                        "--burn-in", "1", "--samples", "3", "--stride", "1",
                        "--out-dir", tmp_path])
        assert code == 0


class TestSimulateMatrix:
    def test_writes_samples_and_manifest(self, tmp_path):
        code = run_cli(["simulate-matrix", "--n-dim", "3", "--p", "0.5",
                        "--switch-rate", "10", "--dt", "1e-2",
                        "--total-time", "2", "--burn-in", "0.5",
                        "--stride", "1", "--seed", "5", "--out-dir", tmp_path])
        assert code == 0
        lines = (tmp_path / "samples.csv").read_text().splitlines()
        assert lines[0] == "t,lambda_1,lambda_2,lambda_3"
        assert len(lines) == 3
        rows = np.loadtxt(tmp_path / "samples.csv", delimiter=",", skiprows=1)
        assert np.all(np.diff(rows[:, 1:], axis=1) >= 0)

    def test_indivisible_dt_is_config_error(self, tmp_path):
        code = run_cli(["simulate-matrix", "--n-dim", "3", "--dt", "3e-3",
                        "--switch-rate", "10", "--total-time", "2",
                        "--out-dir", tmp_path])
        assert code == 2


@pytest.fixture(scope="module")
def samples_csv(tmp_path_factory):
    out_dir = tmp_path_factory.mktemp("sde")
    run_cli(["simulate-sde", "--n-dim", "12", "--beta", "0.5",
             "--dt", "2e-3", "--burn-in", "5", "--samples", "40",
             "--stride", "0.5", "--seed", "11", "--out-dir", out_dir])
    return out_dir / "samples.csv"


class TestAnalyzeNnsd:
    def test_nnsd_outputs(self, tmp_path, samples_csv):
        out = tmp_path / "nnsd.csv"
        code = run_cli(["analyze", "nnsd", "--input", samples_csv,
                        "--beta", "0.5", "--bins", "20", "--out", out,
                        "--out-dir", tmp_path])
        assert code == 0
        data = np.loadtxt(out, delimiter=",", skiprows=1)
        assert data.shape == (20, 3)
        centers = data[:, 0]
        assert np.allclose(data[:, 2], wigner_surmise(0.5, centers), rtol=1e-12)
        meta = json.loads((tmp_path / "nnsd.csv.meta.json").read_text())
        assert meta["n_spacings"] == 40 * 5
        assert meta["reference"] == "surmise"
        assert 0.0 <= meta["ks_to_reference"] <= 1.0
        assert meta["bulk_fraction"] == 0.5

    def test_poisson_reference(self, tmp_path, samples_csv):
        out = tmp_path / "nnsd.csv"
        code = run_cli(["analyze", "nnsd", "--input", samples_csv,
                        "--ref", "poisson", "--out", out,
                        "--out-dir", tmp_path])
        assert code == 0
        data = np.loadtxt(out, delimiter=",", skiprows=1)
        assert np.allclose(data[:, 2], np.exp(-data[:, 0]), rtol=1e-12)

    def test_missing_input_is_config_error(self, tmp_path):
        assert run_cli(["analyze", "nnsd", "--out-dir", tmp_path]) == 2


class TestVerify:
    def test_density_suite_passes(self, tmp_path, capsys):
        code = run_cli(["verify", "--suite", "density", "--c-param", "1",
                        "--out-dir", tmp_path])
        out = capsys.readouterr().out
        assert code == 0
        assert "FAIL" not in out
        assert "m2" in out and "ode residual" in out
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert manifest["counters"]["failures"] == 0

    def test_dual_route_suite_passes(self, tmp_path, capsys):
        code = run_cli(["verify", "--suite", "dual-route",
                        "--out-dir", tmp_path])
        assert code == 0
        assert "FAIL" not in capsys.readouterr().out

    def test_moments_suite_passes(self, tmp_path, capsys):
        code = run_cli(["verify", "--suite", "moments", "--c-param", "1",
                        "--out-dir", tmp_path])
        out = capsys.readouterr().out
        assert code == 0
        assert "FAIL" not in out
        assert "family limit 2" in out


class TestParsing:
    def test_unknown_command_exits_two(self):
        assert run_cli(["frobnicate"]) == 2

    def test_missing_subcommand_exits_two(self):
        assert run_cli([]) == 2
