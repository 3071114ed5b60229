"""
Tests for the polyfield command-line interface.
"""

import json

import pytest

from polyfield.cli import build_parser, main
from polyfield.learn import LearnedModel
from polyfield.poly import MultiPoly, PolyVec


@pytest.fixture
def model_file(tmp_path, disease_polynomial):
    """The exact disease field saved as a learned model."""
    return LearnedModel(field=disease_polynomial, degree=2, objective=0.0).save(tmp_path / "model.json")


def _sideinfo_file(tmp_path, items):
    path = tmp_path / "checks.json"
    path.write_text(
        json.dumps({"domain": {"box": {"lo": [0.0, 0.0], "hi": [1.0, 1.0]}}, "side_info": items, "delta": 1e-6})
    )
    return path


@pytest.mark.unit
class TestParser:
    """Test argument parsing."""

    def test_should_require_a_command(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_should_reject_unknown_model(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["simulate", "--model", "lorenz", "--x0", "0", "--T", "1", "--out", "t.csv"])


@pytest.mark.unit
class TestSimulate:
    """Test the simulate command."""

    def test_should_write_trajectory(self, config_manager, tmp_path, capsys):
        out = tmp_path / "traj.csv"
        status = main(["simulate", "--model", "disease", "--x0", "0.7", "0.3", "--T", "1", "--step", "0.1", "--out", str(out)])
        assert status == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["samples"] == 11
        assert summary["exited_at"] is None
        assert out.read_text().splitlines()[0] == "t,x1,x2"

    def test_malformed_param_should_exit_with_config_status(self, config_manager, tmp_path, capsys):
        status = main(
            ["simulate", "--model", "disease", "--x0", "0.7", "0.3", "--T", "1", "--out", str(tmp_path / "t.csv"), "--param", "b1"]
        )
        assert status == 4
        assert "polyfield: CONFIG_ERROR" in capsys.readouterr().err


@pytest.mark.unit
class TestEvaluate:
    """Test the evaluate command."""

    def test_exact_model_should_have_zero_sup_distance(self, config_manager, model_file, capsys):
        status = main(["evaluate", "--model-file", str(model_file), "--truth", "disease", "--resolution", "5"])
        assert status == 0
        assert json.loads(capsys.readouterr().out)["value"] == pytest.approx(0.0, abs=1e-12)

    def test_trajectory_metric_should_use_horizon(self, config_manager, model_file, capsys):
        status = main(
            ["evaluate", "--model-file", str(model_file), "--truth", "disease", "--metric", "traj",
             "--resolution", "3", "--T", "0.5", "--step", "0.05"]
        )
        assert status == 0
        assert json.loads(capsys.readouterr().out)["metric"] == "traj"

    def test_dimension_mismatch_should_be_config_error(self, config_manager, tmp_path):
        path = LearnedModel(field=PolyVec([MultiPoly.variable(1, 0)]), degree=1, objective=0.0).save(tmp_path / "m.json")
        assert main(["evaluate", "--model-file", str(path), "--truth", "disease"]) == 4


@pytest.mark.unit
class TestCertify:
    """Test the certify command."""

    def test_satisfied_side_info_should_exit_zero(self, config_manager, tmp_path, model_file, capsys):
        path = _sideinfo_file(tmp_path, [{"tag": "inv", "sets": [{"box": {"lo": [0.0, 0.0], "hi": [1.0, 1.0]}}]}])
        assert main(["certify", "--model-file", str(model_file), "--sideinfo", str(path), "--resolution", "5"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["residuals"][0]["tag"] == "inv"

    def test_violation_should_exit_two(self, config_manager, tmp_path, model_file, capsys):
        item = {"tag": "mon", "constraints": [
            {"component": 0, "variable": 0, "nonneg": [{"box": {"lo": [0.0, 0.0], "hi": [1.0, 1.0]}}]}
        ]}
        path = _sideinfo_file(tmp_path, [item])
        assert main(["certify", "--model-file", str(model_file), "--sideinfo", str(path), "--resolution", "5"]) == 2
        assert "SIDE_INFO_VIOLATED" in capsys.readouterr().err

    def test_unreadable_file_should_be_config_error(self, config_manager, tmp_path, model_file):
        assert main(["certify", "--model-file", str(model_file), "--sideinfo", str(tmp_path / "absent.json")]) == 4


@pytest.mark.unit
class TestLearn:
    """Test the learn command on a tiny configuration."""

    def test_should_run_and_print_manifest(self, config_manager, tmp_path, capsys):
        pytest.importorskip("cvxopt.solvers")
        config = {
            "name": "cli",
            "model": "disease",
            "degrees": [1],
            "stacks": [{"name": "none", "side_info": []}],
            "schedule": {"trajectories": [{"x0": [0.7, 0.3], "count": 4}]},
            "evaluation": {"horizon": 0.5, "sup_resolution": 3, "trajectory_resolution": 2, "grid_resolution": 2, "step": 0.1},
        }
        path = tmp_path / "cli.json"
        path.write_text(json.dumps(config))
        out_dir = tmp_path / "run"
        assert main(["learn", "--config", str(path), "--out-dir", str(out_dir)]) == 0
        assert json.loads(capsys.readouterr().out)["name"] == "cli"
        assert (out_dir / "manifest.json").exists()

    def test_missing_config_should_exit_four(self, config_manager, tmp_path):
        assert main(["learn", "--config", str(tmp_path / "absent.json"), "--out-dir", str(tmp_path)]) == 4
