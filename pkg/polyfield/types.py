"""
Type definitions for polyfield.

This module contains the enums and configuration dataclasses shared across
the polynomial, conic, side-information and learning layers.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict

from dataclasses_json import dataclass_json


class ConeKind(str, Enum):
    """Cone tags attached to variable groups of a conic program."""

    FREE = "free"
    NONNEG = "nonneg"
    SOC = "soc"
    RSOC = "rsoc"
    PSD = "psd"


class SolveStatus(str, Enum):
    """Termination status of a conic solve."""

    OPTIMAL = "optimal"
    PRIMAL_INFEASIBLE = "primal-infeasible"
    DUAL_INFEASIBLE = "dual-infeasible"
    MAX_ITERATIONS = "max-iterations"


class LossKind(str, Enum):
    """Data-fit losses supported by the learner."""

    L2 = "l2"
    L1 = "l1"
    LINF = "linf"


class SideInfoTag(str, Enum):
    """Tags of the side-information families."""

    INTERP = "interp"
    SYM = "sym"
    POS = "pos"
    MON = "mon"
    INV = "inv"
    GRAD = "grad"
    HAM = "ham"
    COMPOSITE = "composite"


class Metric(str, Enum):
    """Distance metrics exposed by ``polyfield evaluate``."""

    SUP = "sup"
    TRAJ = "traj"


@dataclass_json
@dataclass
class PolyfieldConfig:
    """Configuration for polyfield."""

    solver_backend: str = "cvxopt"
    gap_tol: float = 1e-8
    feas_tol: float = 1e-8
    max_iters: int = 200
    multiplier_degree: int = 2
    integrator_step: float = 1e-3
    residual_resolution: int = 50
    residual_delta: float = 1e-5
    verbose: bool = False


@dataclass
class SolverOptions:
    """Tolerances and iteration cap handed to a conic backend."""

    gap_tol: float = 1e-8
    feas_tol: float = 1e-8
    max_iters: int = 200
    backend: str = "cvxopt"
    show_progress: bool = False

    @classmethod
    def from_config(cls, config: PolyfieldConfig) -> "SolverOptions":
        """
        Build solver options from a PolyfieldConfig.

        Args:
            config: Active configuration

        Returns:
            SolverOptions carrying the configured tolerances

        Examples:
            >>> opts = SolverOptions.from_config(PolyfieldConfig(gap_tol=1e-9))
            >>> opts.gap_tol
            1e-09
        """
        return cls(
            gap_tol=config.gap_tol,
            feas_tol=config.feas_tol,
            max_iters=config.max_iters,
            backend=config.solver_backend,
            show_progress=config.verbose,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "gap_tol": self.gap_tol,
            "feas_tol": self.feas_tol,
            "max_iters": self.max_iters,
            "backend": self.backend,
        }
