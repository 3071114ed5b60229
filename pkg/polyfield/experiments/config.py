"""
Experiment configuration files.

Configs are JSON documents decoded through dataclasses-json schemas, so a
wrong type or a missing required field surfaces as a ConfigError before any
work starts.

Schema (all keys snake_case):

    name            experiment name, used for output file names
    model           ground-truth id (disease, pendulum, tumor, disease_controlled)
    params          ground-truth parameter overrides
    degrees         candidate degrees; every stack is fitted at every degree
    stacks          [{"name", "side_info": [side-information JSON]}]
    schedule        {"trajectories": [{"x0", "times" | ("count", "spacing", "start")}],
                     "random": {"count", "lo", "hi", "seed", "count_times", "spacing", "start"}}
    dataset         {"noise", "seed", "state_noise", "triplet", "derivative"}
    fixed           {"<component>": polynomial pairs}
    loss, l1_penalty, multiplier_degree
    solver          {"gap_tol", "feas_tol", "max_iters"}
    evaluation      {"horizon", "sup_resolution", "trajectory_resolution",
                     "grid_resolution", "step"}
    control         {"degree", "horizon", "alpha", "x0", "resolution", "step", "stacks"}
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
from dataclasses_json import dataclass_json
from marshmallow import ValidationError

from ..dynamics import ScheduleEntry, uniform_schedule
from ..errors import ConfigError
from ..poly import MultiPoly
from ..sideinfo import SideInfo
from ..types import LossKind, SolverOptions

logger = logging.getLogger(__name__)

CONFIG_DIR = Path(__file__).parent / "configs"


@dataclass_json
@dataclass
class TrajectorySpec:
    """One observed trajectory: explicit times, or count samples spaced evenly."""

    x0: List[float]
    times: Optional[List[float]] = None
    count: Optional[int] = None
    spacing: float = 1.0
    start: int = 1

    def entry(self) -> ScheduleEntry:
        if self.times is not None:
            return ScheduleEntry(list(self.x0), list(self.times))
        if self.count is None:
            raise ConfigError("Trajectory needs either 'times' or 'count'")
        return uniform_schedule(self.x0, self.count, self.spacing, self.start)


@dataclass_json
@dataclass
class RandomInitSpec:
    """Initial conditions drawn uniformly from a box with a fixed seed."""

    count: int
    lo: List[float]
    hi: List[float]
    seed: int = 0
    count_times: int = 20
    spacing: float = 0.05
    start: int = 0


@dataclass_json
@dataclass
class ScheduleConfig:
    trajectories: List[TrajectorySpec] = field(default_factory=list)
    random: Optional[RandomInitSpec] = None

    def entries(self) -> List[ScheduleEntry]:
        out = [t.entry() for t in self.trajectories]
        if self.random is not None:
            rand = self.random
            rng = np.random.default_rng(rand.seed)
            inits = rng.uniform(rand.lo, rand.hi, size=(rand.count, len(rand.lo)))
            out.extend(
                uniform_schedule(x0.tolist(), rand.count_times, rand.spacing, rand.start)
                for x0 in inits
            )
        if not out:
            raise ConfigError("Schedule has no trajectories")
        return out


@dataclass_json
@dataclass
class DatasetConfig:
    noise: float = 0.0
    seed: Optional[int] = 0
    state_noise: bool = False
    triplet: bool = False
    derivative: str = "exact"


@dataclass_json
@dataclass
class StackConfig:
    """A named list of side-information items."""

    name: str
    side_info: List[Dict[str, Any]] = field(default_factory=list)

    def items(self, n: int) -> List[SideInfo]:
        return [SideInfo.from_json(entry, n) for entry in self.side_info]


@dataclass_json
@dataclass
class SolverConfig:
    gap_tol: float = 1e-8
    feas_tol: float = 1e-8
    max_iters: int = 200
    backend: str = "cvxopt"

    def options(self) -> SolverOptions:
        return SolverOptions(self.gap_tol, self.feas_tol, self.max_iters, self.backend)


@dataclass_json
@dataclass
class EvaluationConfig:
    horizon: float = 1.0
    sup_resolution: int = 50
    trajectory_resolution: int = 10
    grid_resolution: int = 25
    step: Optional[float] = None


@dataclass_json
@dataclass
class ControlConfig:
    """Grid search over constant controls u in [0, 1]^2."""

    degree: int = 3
    horizon: float = 20.0
    alpha: float = 0.4
    x0: List[float] = field(default_factory=lambda: [0.5, 0.4])
    resolution: int = 101
    step: Optional[float] = 1e-2
    stacks: List[str] = field(default_factory=list)


@dataclass_json
@dataclass
class ExperimentConfig:
    name: str
    model: str
    degrees: List[int]
    stacks: List[StackConfig]
    schedule: ScheduleConfig
    dataset: DatasetConfig = field(default_factory=DatasetConfig)
    params: Dict[str, float] = field(default_factory=dict)
    fixed: Dict[str, List[Any]] = field(default_factory=dict)
    loss: str = LossKind.L2.value
    l1_penalty: float = 0.0
    multiplier_degree: int = 2
    solver: Optional[SolverConfig] = None
    evaluation: EvaluationConfig = field(default_factory=EvaluationConfig)
    control: Optional[ControlConfig] = None

    def fixed_components(self, n: int) -> Dict[int, MultiPoly]:
        try:
            return {int(i): MultiPoly.from_pairs(pairs, n) for i, pairs in self.fixed.items()}
        except (TypeError, ValueError) as error:
            raise ConfigError(f"Malformed fixed component: {error}") from error

    def stack(self, name: str) -> StackConfig:
        for stack in self.stacks:
            if stack.name == name:
                return stack
        raise ConfigError(f"Experiment {self.name} has no stack {name!r}")

    def validate(self) -> None:
        """
        Semantic checks the schema cannot express.

        Raises:
            ConfigError: On an invalid loss, degree, stack list or control block
        """
        try:
            LossKind(self.loss)
        except ValueError as error:
            raise ConfigError(f"Unknown loss {self.loss!r}") from error
        if not self.degrees or any(d < 0 for d in self.degrees):
            raise ConfigError("Degrees must be a nonempty list of nonnegative integers")
        if self.multiplier_degree < 0 or self.multiplier_degree % 2:
            raise ConfigError("multiplier_degree must be even and nonnegative")
        names = [s.name for s in self.stacks]
        if len(set(names)) != len(names) or not names:
            raise ConfigError("Stack names must be unique and at least one stack is required")
        if any(ch.isspace() or ch in "/\\" for name in names for ch in name):
            raise ConfigError("Stack names cannot contain whitespace or path separators")
        if self.control is not None:
            if self.control.resolution < 2:
                raise ConfigError("Control grid resolution must be at least 2")
            if self.control.horizon <= 0 or self.control.alpha < 0:
                raise ConfigError("Control needs horizon > 0 and alpha >= 0")
            for name in self.control.stacks:
                self.stack(name)


def load_experiment_config(source: Union[str, Path, Dict[str, Any]]) -> ExperimentConfig:
    """
    Load and validate an experiment configuration.

    Args:
        source: A dict, a path to a JSON file, or the name of a shipped config
            (disease, pendulum, tumor, control)

    Returns:
        Validated ExperimentConfig

    Raises:
        ConfigError: If the file is missing, unreadable or invalid

    Examples:
        >>> config = load_experiment_config("disease")
        >>> config.degrees
        [3, 2]
    """
    if isinstance(source, dict):
        data = source
    else:
        path = Path(source)
        if not path.exists() and (CONFIG_DIR / f"{source}.json").exists():
            path = CONFIG_DIR / f"{source}.json"
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as error:
            raise ConfigError(f"Cannot read experiment config {source}: {error}") from error
    try:
        config = ExperimentConfig.schema().load(data)
    except (ValidationError, KeyError, TypeError, ValueError) as error:
        raise ConfigError(f"Invalid experiment config: {error}") from error
    config.validate()
    return config


def shipped_configs() -> List[str]:
    return sorted(p.stem for p in CONFIG_DIR.glob("*.json"))
