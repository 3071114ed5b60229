"""
Ground truths, experiment configurations, the end-to-end runner and the
constant-control grid search.
"""

from .config import (
    ControlConfig,
    DatasetConfig,
    EvaluationConfig,
    ExperimentConfig,
    RandomInitSpec,
    ScheduleConfig,
    SolverConfig,
    StackConfig,
    TrajectorySpec,
    load_experiment_config,
    shipped_configs,
)
from .control import (
    ControlProblem,
    ControlResult,
    ControlTable,
    control_grid,
    control_table,
    optimal_control_search,
    planned_costs,
)
from .export import export_field_grid, read_field_grid
from .ground_truth import GroundTruthModel, available_models, ground_truth
from .runner import ExperimentReport, ModelEntry, run_control, run_experiment

__all__ = [
    "ControlConfig",
    "ControlProblem",
    "ControlResult",
    "ControlTable",
    "DatasetConfig",
    "EvaluationConfig",
    "ExperimentConfig",
    "ExperimentReport",
    "GroundTruthModel",
    "ModelEntry",
    "RandomInitSpec",
    "ScheduleConfig",
    "SolverConfig",
    "StackConfig",
    "TrajectorySpec",
    "available_models",
    "control_grid",
    "control_table",
    "export_field_grid",
    "ground_truth",
    "load_experiment_config",
    "optimal_control_search",
    "planned_costs",
    "read_field_grid",
    "run_control",
    "run_experiment",
    "shipped_configs",
]
