"""
End-to-end experiment pipeline.

Stages run in order (truth, dataset, then fit and evaluate for every stack
and degree, then control); every emitted file is recorded in a manifest. A
failing stage writes the partial manifest and raises ExperimentError.
"""

import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from ..dynamics import sample_dataset, sup_distance, trajectory_distance, write_dataset_csv
from ..errors import ConfigError, ExperimentError
from ..learn import LearnedModel, LearningProblem, fit
from ..types import LossKind
from .config import ExperimentConfig, load_experiment_config
from .control import ControlProblem, ControlTable, control_table
from .export import export_field_grid
from .ground_truth import ground_truth

logger = logging.getLogger(__name__)

MANIFEST = "manifest.json"


@dataclass
class ModelEntry:
    stack: str
    degree: int
    path: str
    grid: str
    objective: float
    status: str
    residuals: List[Dict[str, Any]]
    sup_distance: float
    trajectory_distance: float

    def to_json(self) -> Dict[str, Any]:
        return dict(self.__dict__)


@dataclass
class ExperimentReport:
    """Models, distances, control table and emitted files of one run."""

    name: str
    out_dir: Path
    models: List[ModelEntry] = field(default_factory=list)
    control: Optional[ControlTable] = None
    files: List[str] = field(default_factory=list)
    learned: Dict[str, LearnedModel] = field(default_factory=dict, repr=False)

    def model(self, stack: str, degree: int) -> LearnedModel:
        return self.learned[f"{stack}@{degree}"]

    def to_json(self, failed_stage: Optional[str] = None) -> Dict[str, Any]:
        data = {
            "name": self.name,
            "models": [m.to_json() for m in self.models],
            "control": None if self.control is None else self.control.to_json(),
            "files": list(self.files),
        }
        if failed_stage is not None:
            data["failed_stage"] = failed_stage
        return data

    def write_manifest(self, failed_stage: Optional[str] = None) -> Path:
        path = self.out_dir / MANIFEST
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_json(failed_stage), indent=2))
        return path


def run_experiment(
    config: Union[ExperimentConfig, str, Path, Dict[str, Any]],
    out_dir: Union[str, Path],
) -> ExperimentReport:
    """
    Run every configured stack at every configured degree.

    For each (stack, degree) this writes a model file and a field-grid CSV
    and records residuals plus sup and trajectory distances to the truth.
    With a control block, the planning models of the listed stacks at the
    control degree go through the grid search.

    Args:
        config: ExperimentConfig, a config path, a shipped name or a dict
        out_dir: Output directory

    Returns:
        ExperimentReport

    Raises:
        ConfigError: If the config is invalid
        ExperimentError: If a stage fails; the partial manifest is on disk
    """
    if not isinstance(config, ExperimentConfig):
        config = load_experiment_config(config)
    out = Path(out_dir)
    report = ExperimentReport(config.name, out)
    stage = "ground_truth"

    def record(path: Path) -> None:
        report.files.append(str(path.relative_to(out)))

    try:
        truth = ground_truth(config.model, config.params)
        domain = truth.domain
        n = domain.n

        stage = "dataset"
        data = sample_dataset(
            truth.field,
            config.schedule.entries(),
            config.dataset.noise,
            config.dataset.seed,
            generator=config.model,
            state_noise=config.dataset.state_noise,
            triplet=config.dataset.triplet,
            derivative=config.dataset.derivative,
            step=config.evaluation.step,
        )
        record(write_dataset_csv(data, out / "dataset.csv"))
        record(export_field_grid(truth.field, domain, config.evaluation.grid_resolution, out / "grids" / "truth.csv"))

        fixed = config.fixed_components(n)
        opts = config.solver.options() if config.solver else None
        evaluation = config.evaluation
        for degree in config.degrees:
            for stack in config.stacks:
                key = f"{stack.name}@{degree}"
                stage = f"fit:{key}"
                problem = LearningProblem(
                    data,
                    degree,
                    domain,
                    stack.items(n),
                    fixed,
                    LossKind(config.loss),
                    config.l1_penalty,
                    config.multiplier_degree,
                )
                model = fit(problem, opts)
                report.learned[key] = model
                model_path = model.save(out / "models" / f"{stack.name}_deg{degree}.json")
                record(model_path)

                stage = f"evaluate:{key}"
                grid_path = export_field_grid(
                    model.field, domain, evaluation.grid_resolution, out / "grids" / f"{stack.name}_deg{degree}.csv"
                )
                record(grid_path)
                entry = ModelEntry(
                    stack.name,
                    degree,
                    str(model_path.relative_to(out)),
                    str(grid_path.relative_to(out)),
                    model.objective,
                    model.status.value,
                    [r.to_json() for r in model.residuals],
                    sup_distance(truth.field, model.field, domain, evaluation.sup_resolution),
                    trajectory_distance(
                        truth.field,
                        model.field,
                        domain,
                        evaluation.horizon,
                        evaluation.trajectory_resolution,
                        evaluation.step,
                    ),
                )
                report.models.append(entry)
                logger.info(
                    f"{config.name} {key}: objective={entry.objective:.4g} "
                    f"sup={entry.sup_distance:.4g} traj={entry.trajectory_distance:.4g}"
                )

        if config.control is not None:
            stage = "control"
            block = config.control
            cp = ControlProblem(truth.field, block.horizon, block.alpha, block.x0, block.resolution, block.step)
            planners = []
            for name in block.stacks:
                key = f"{name}@{block.degree}"
                if key not in report.learned:
                    raise ExperimentError(f"No model {key} to plan with", stage)
                planners.append((name, report.learned[key].field))
            report.control = control_table(cp, planners)
            control_path = out / "control.json"
            control_path.write_text(json.dumps(report.control.to_json(), indent=2))
            record(control_path)
    except ExperimentError as error:
        report.write_manifest(error.stage)
        raise
    except Exception as error:
        report.write_manifest(stage)
        logger.error(f"Experiment {config.name} failed at {stage}: {error}")
        raise ExperimentError(f"Stage {stage} failed: {error}", stage, error) from error

    report.write_manifest()
    logger.info(f"Experiment {config.name} wrote {len(report.files)} files to {out}")
    return report


def run_control(
    config: Union[ExperimentConfig, str, Path, Dict[str, Any]],
    out_dir: Union[str, Path],
) -> ControlTable:
    """
    Fit only the planning models of the control block and run the search.

    Raises:
        ConfigError: If the config has no control block
        ExperimentError: If a stage fails
    """
    if not isinstance(config, ExperimentConfig):
        config = load_experiment_config(config)
    if config.control is None:
        raise ConfigError(f"Experiment {config.name} has no control block")
    planning = replace(
        config,
        degrees=[config.control.degree],
        stacks=[config.stack(name) for name in config.control.stacks],
    )
    return run_experiment(planning, out_dir).control
