"""
polyfield

Learning polynomial vector fields from noisy trajectory data while imposing
side information: interpolation, symmetry, sign and monotonicity regions,
invariant sets, and gradient or Hamiltonian structure. Each item compiles to
affine equalities or sum-of-squares certificates, and the fit is a single
conic program solved with cvxopt.

Examples:
    >>> from polyfield import LearningProblem, fit, ground_truth, sample_dataset
    >>> from polyfield.dynamics import uniform_schedule
    >>> from polyfield.sideinfo import Inv
    >>> truth = ground_truth("disease")
    >>> data = sample_dataset(truth.field, [uniform_schedule([0.7, 0.3], 20, 1.0)], 1e-4, seed=0)
    >>> problem = LearningProblem(data, 2, truth.domain, [Inv([truth.domain])])
    >>> model = fit(problem)

    # Compare against the ground truth
    >>> from polyfield import sup_distance
    >>> sup_distance(truth.field, model.field, truth.domain) < 0.1
    True
"""

__version__ = "0.1.0"

from .config import DEFAULT_CONFIG, ConfigurationManager, current_config
from .dynamics import (
    Dataset,
    Trajectory,
    integrate,
    sample_dataset,
    sup_distance,
    trajectory_distance,
)
from .errors import (
    ConfigError,
    DegreeError,
    DimensionMismatchError,
    DivergenceError,
    EmptyGridError,
    ExperimentError,
    InfeasibleSideInfoError,
    InvalidInputError,
    PolyfieldError,
    SideInfoViolationError,
    SolverFailureError,
)
from .experiments import ground_truth, load_experiment_config, run_experiment
from .learn import LearnedModel, LearningProblem, fit
from .poly import AffinePoly, MultiPoly, PolyVec
from .semialg import BasicSemialgebraicSet, box_set
from .sideinfo import Composite, Grad, Ham, Interp, Inv, Mon, Pos, SideInfo, Sym
from .types import LossKind, PolyfieldConfig, SolverOptions, SolveStatus
from .utils import parse_error

__all__ = [
    "AffinePoly",
    "BasicSemialgebraicSet",
    "Composite",
    "ConfigError",
    "ConfigurationManager",
    "DEFAULT_CONFIG",
    "Dataset",
    "DegreeError",
    "DimensionMismatchError",
    "DivergenceError",
    "EmptyGridError",
    "ExperimentError",
    "Grad",
    "Ham",
    "InfeasibleSideInfoError",
    "Interp",
    "InvalidInputError",
    "Inv",
    "LearnedModel",
    "LearningProblem",
    "LossKind",
    "Mon",
    "MultiPoly",
    "PolyVec",
    "PolyfieldConfig",
    "PolyfieldError",
    "Pos",
    "SideInfo",
    "SideInfoViolationError",
    "SolveStatus",
    "SolverFailureError",
    "SolverOptions",
    "Sym",
    "Trajectory",
    "box_set",
    "current_config",
    "fit",
    "ground_truth",
    "integrate",
    "load_experiment_config",
    "parse_error",
    "run_experiment",
    "sample_dataset",
    "sup_distance",
    "trajectory_distance",
]
