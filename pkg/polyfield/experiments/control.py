"""
Constant-control design by exhaustive grid search.

For every u on a uniform grid of [0, 1]^2 the planning model is integrated
under x' = p(x) - diag(u) x from a fixed initial state, and the cost
x_1(T) + x_2(T) + alpha (u_1 + u_2) is recorded. The minimizer is then
applied to the true field to obtain the realized outcome.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..dynamics import ControlledField, FieldHandle, integrate, integrate_batch
from ..errors import InvalidInputError, SolverFailureError

logger = logging.getLogger(__name__)


@dataclass
class ControlProblem:
    """
    Attributes:
        truth: Field the chosen control is applied to
        horizon: T
        alpha: Weight of the control cost
        x0: Initial state
        resolution: Grid points per control axis
        step: Integrator step (None uses the configured default)
    """

    truth: FieldHandle
    horizon: float = 20.0
    alpha: float = 0.4
    x0: Sequence[float] = (0.5, 0.4)
    resolution: int = 101
    step: Optional[float] = None

    def __post_init__(self):
        if self.horizon <= 0:
            raise InvalidInputError(f"Horizon must be positive, got {self.horizon}")
        if self.alpha < 0:
            raise InvalidInputError(f"Cost weight must be nonnegative, got {self.alpha}")
        if self.resolution < 2:
            raise InvalidInputError(f"Control grid resolution must be at least 2, got {self.resolution}")


@dataclass
class ControlResult:
    """Chosen control, its planned cost and the outcome under the true field."""

    u: Tuple[float, float]
    planned_cost: float
    realized_state: Tuple[float, float]
    realized_cost: float
    skipped: int = 0

    def to_json(self) -> Dict[str, Any]:
        return {
            "u1": self.u[0],
            "u2": self.u[1],
            "planned_cost": self.planned_cost,
            "x1_T": self.realized_state[0],
            "x2_T": self.realized_state[1],
            "realized_cost": self.realized_cost,
            "skipped": self.skipped,
        }


class _ControlGrid:
    """Stacks one controlled copy of a field per grid row."""

    def __init__(self, model: FieldHandle, U: np.ndarray):
        self.model = model
        self.U = U

    @property
    def n(self) -> int:
        return self.model.n

    def evaluate(self, X):
        X = np.atleast_2d(X)
        return np.asarray(self.model.evaluate(X)) - self.U * X

    def jacobian(self, X):
        X = np.atleast_2d(X)
        return np.asarray(self.model.jacobian(X)) - self.U[:, :, None] * np.eye(self.n)[None]


def control_grid(resolution: int) -> np.ndarray:
    """Grid points of [0, 1]^2 in row-major order, shape (resolution^2, 2)."""
    axis = np.linspace(0.0, 1.0, resolution)
    u1, u2 = np.meshgrid(axis, axis, indexing="ij")
    return np.stack([u1.ravel(), u2.ravel()], axis=1)


def planned_costs(cp: ControlProblem, model: FieldHandle) -> Tuple[np.ndarray, np.ndarray]:
    """
    Cost of every grid control under the planning model.

    Returns:
        Tuple (U, costs); costs are NaN where the simulation diverged
    """
    U = control_grid(cp.resolution)
    X0 = np.tile(np.asarray(cp.x0, dtype=float), (U.shape[0], 1))
    result = integrate_batch(_ControlGrid(model, U), X0, cp.horizon, cp.step, record=False)
    costs = result.final.sum(axis=1) + cp.alpha * U.sum(axis=1)
    costs[result.diverged] = np.nan
    return U, costs


def optimal_control_search(cp: ControlProblem, model: FieldHandle) -> ControlResult:
    """
    Grid argmin of the planned cost, realized under the true field.

    Ties are broken by the smallest u1 + u2, then the smallest u1.
    Divergent grid points are skipped with a warning.

    Raises:
        SolverFailureError: If every grid point diverges
    """
    U, costs = planned_costs(cp, model)
    finite = np.isfinite(costs)
    skipped = int(np.sum(~finite))
    if skipped:
        logger.warning(f"Skipped {skipped} control grid points whose simulation diverged")
    if not np.any(finite):
        raise SolverFailureError("Every control grid point diverged under the planning model")
    idx = np.flatnonzero(finite)
    order = np.lexsort((U[idx, 0], U[idx].sum(axis=1), costs[idx]))
    best = idx[order[0]]
    u = (float(U[best, 0]), float(U[best, 1]))

    realized = integrate(
        ControlledField(cp.truth, u), cp.x0, cp.horizon, cp.step, allow_outside=True
    ).final_state
    realized_cost = float(realized.sum() + cp.alpha * sum(u))
    logger.info(
        f"Control u=({u[0]:.2f}, {u[1]:.2f}) planned cost {costs[best]:.4f}, "
        f"realized x(T)=({realized[0]:.4f}, {realized[1]:.4f})"
    )
    return ControlResult(
        u, float(costs[best]), (float(realized[0]), float(realized[1])), realized_cost, skipped
    )


@dataclass
class ControlTable:
    """One row per planning model, realized under the true field."""

    rows: List[Tuple[str, ControlResult]] = field(default_factory=list)

    def result(self, label: str) -> ControlResult:
        for name, result in self.rows:
            if name == label:
                return result
        raise KeyError(label)

    def to_json(self) -> List[Dict[str, Any]]:
        return [{"label": name, **result.to_json()} for name, result in self.rows]


def control_table(
    cp: ControlProblem, planners: Sequence[Tuple[str, FieldHandle]], include_truth: bool = True
) -> ControlTable:
    """Run the search for each labelled planning model, plus the truth."""
    table = ControlTable()
    for label, model in planners:
        table.rows.append((label, optimal_control_search(cp, model)))
    if include_truth:
        table.rows.append(("truth", optimal_control_search(cp, cp.truth)))
    return table
