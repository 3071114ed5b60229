"""
Tests for the end-to-end experiment runner.
"""

import json
from dataclasses import replace

import pytest

pytest.importorskip("cvxopt.solvers")

from polyfield.dynamics import hamiltonian_drift
from polyfield.errors import ConfigError, ExperimentError, InfeasibleSideInfoError
from polyfield.experiments import EvaluationConfig, load_experiment_config, run_control, run_experiment
from polyfield.learn import LearnedModel


def _config(**overrides):
    data = {
        "name": "tiny",
        "model": "disease",
        "degrees": [1],
        "stacks": [
            {"name": "none", "side_info": []},
            {"name": "interp", "side_info": [
                {"tag": "interp", "points": [{"x": [0.0, 0.0], "y": [0.0, 0.0]}]}
            ]},
        ],
        "schedule": {"trajectories": [{"x0": [0.7, 0.3], "count": 6, "spacing": 1.0}]},
        "dataset": {"noise": 0.0, "seed": 0},
        "evaluation": {
            "horizon": 0.5,
            "sup_resolution": 5,
            "trajectory_resolution": 3,
            "grid_resolution": 3,
            "step": 0.05,
        },
    }
    data.update(overrides)
    return data


def _control_block(**overrides):
    block = {"degree": 1, "horizon": 1.0, "alpha": 0.4, "resolution": 3, "step": 0.1, "stacks": ["none"]}
    block.update(overrides)
    return block


@pytest.mark.experiments
class TestRunExperiment:
    """Test the staged pipeline and its manifest."""

    def test_should_write_models_grids_and_manifest(self, config_manager, tmp_path):
        report = run_experiment(_config(), tmp_path)
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert manifest["name"] == "tiny"
        assert "failed_stage" not in manifest
        assert set(manifest["files"]) == {
            "dataset.csv",
            "grids/truth.csv",
            "models/none_deg1.json",
            "grids/none_deg1.csv",
            "models/interp_deg1.json",
            "grids/interp_deg1.csv",
        }
        assert [(m.stack, m.degree) for m in report.models] == [("none", 1), ("interp", 1)]

    def test_model_files_should_reload(self, config_manager, tmp_path):
        report = run_experiment(_config(), tmp_path)
        loaded = LearnedModel.load(tmp_path / "models" / "interp_deg1.json")
        assert loaded.field == report.model("interp", 1).field

    def test_entries_should_carry_distances(self, config_manager, tmp_path):
        report = run_experiment(_config(), tmp_path)
        for entry in report.models:
            assert entry.sup_distance >= 0.0
            assert entry.trajectory_distance >= 0.0
            assert entry.status == "optimal"
        interp = report.models[1]
        assert [r["tag"] for r in interp.residuals] == ["interp"]

    def test_failing_fit_should_leave_partial_manifest(self, config_manager, tmp_path):
        bad = {"name": "bad", "side_info": [
            {"tag": "interp", "points": [{"x": [0.5, 0.5], "y": [1.0, 0.0]}, {"x": [0.5, 0.5], "y": [0.0, 0.0]}]}
        ]}
        stacks = _config()["stacks"][:1] + [bad]
        with pytest.raises(ExperimentError) as error:
            run_experiment(_config(stacks=stacks), tmp_path)
        assert error.value.stage == "fit:bad@1"
        assert isinstance(error.value.cause, InfeasibleSideInfoError)
        assert error.value.exit_status == InfeasibleSideInfoError.exit_status
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert manifest["failed_stage"] == "fit:bad@1"
        assert "models/none_deg1.json" in manifest["files"]

    def test_control_block_should_write_table(self, config_manager, tmp_path):
        report = run_experiment(_config(control=_control_block()), tmp_path)
        table = json.loads((tmp_path / "control.json").read_text())
        assert [row["label"] for row in table] == ["none", "truth"]
        assert report.control.result("truth").u == (
            table[1]["u1"],
            table[1]["u2"],
        )

    def test_control_needs_a_fitted_planner(self, config_manager, tmp_path):
        config = load_experiment_config(_config(control=_control_block(degree=2)))
        with pytest.raises(ExperimentError) as error:
            run_experiment(config, tmp_path)
        assert error.value.stage == "control"


@pytest.mark.experiments
class TestRunControl:
    """Test the control-only entry point."""

    def test_should_fit_only_the_planners(self, config_manager, tmp_path):
        table = run_control(_config(control=_control_block()), tmp_path)
        assert [label for label, _ in table.rows] == ["none", "truth"]
        assert not (tmp_path / "models" / "interp_deg1.json").exists()

    def test_should_require_a_control_block(self, tmp_path):
        with pytest.raises(ConfigError):
            run_control(_config(), tmp_path)

    @pytest.mark.slow
    def test_shipped_disease_experiment_should_run(self, config_manager, tmp_path):
        report = run_experiment("disease", tmp_path)
        assert len(report.models) == 8
        best = report.model("interp_inv_mon", 2)
        assert best.is_optimal


def _restricted(name, degrees, stacks, **evaluation):
    config = load_experiment_config(name)
    block = dict(horizon=1.0, sup_resolution=5, trajectory_resolution=2, grid_resolution=2, step=0.05)
    block.update(evaluation)
    return replace(
        config,
        degrees=degrees,
        stacks=[config.stack(s) for s in stacks],
        evaluation=EvaluationConfig(**block),
        control=None,
    )


@pytest.mark.experiments
class TestShippedExperiments:
    """Run the shipped configs, trimmed where a full run is too long."""

    def test_disease_cubic_stacks_should_solve(self, config_manager, tmp_path):
        report = run_experiment(_restricted("disease", [3], ["none", "interp_inv_mon"]), tmp_path)
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert "failed_stage" not in manifest
        assert [(m.stack, m.degree) for m in report.models] == [("none", 3), ("interp_inv_mon", 3)]
        assert all(entry.status == "optimal" for entry in report.models)

    def test_control_planner_without_side_info_should_solve(self, config_manager, tmp_path):
        config = load_experiment_config("control")
        planning = replace(
            config,
            evaluation=EvaluationConfig(horizon=1.0, sup_resolution=5, trajectory_resolution=2, grid_resolution=2, step=0.05),
            control=replace(config.control, horizon=1.0, resolution=3, stacks=["none"]),
        )
        table = run_control(planning, tmp_path)
        assert [label for label, _ in table.rows] == ["none", "truth"]

    @pytest.mark.slow
    def test_control_table_should_order_by_side_information(self, config_manager, tmp_path):
        table = run_control("control", tmp_path)
        truth = table.result("truth").realized_state
        assert max(truth) <= 0.01
        assert max(table.result("interp_inv_mon").realized_state) <= 0.05
        bare = table.result("none").realized_state
        assert bare[0] == pytest.approx(0.45, abs=0.1)
        assert bare[1] == pytest.approx(0.40, abs=0.1)
        labels = ["none", "interp", "interp_inv", "interp_inv_mon"]
        costs = [max(table.result(label).realized_state) for label in labels]
        for coarse, fine in zip(costs, costs[1:]):
            assert fine <= coarse + 0.05

    @pytest.mark.slow
    def test_pendulum_full_stack_should_halve_the_trajectory_gap(self, config_manager, tmp_path):
        config = _restricted(
            "pendulum", [5], ["none", "sym_pos_ham"],
            horizon=3.0, sup_resolution=25, trajectory_resolution=10, step=0.01,
        )
        report = run_experiment(config, tmp_path)
        bare, full = report.models
        assert full.trajectory_distance <= 0.5 * bare.trajectory_distance
        model = report.model("sym_pos_ham", 5)
        assert model.potential is not None
        for x0 in ([0.785, 0.0], [2.0, 0.5], [-1.0, -1.0]):
            assert hamiltonian_drift(model.potential, model.field, x0, 3.0, 0.01) <= 1e-4
