"""
Distances between vector fields and the diagnostics built on them.

All quantities are grid estimates: the sup-norm gap ||f - g||_Omega, the
trajectory distance d_{Omega,T} over a grid of initial conditions, a
Lipschitz estimate from Jacobian spectral norms, and the Gronwall factor
relating the first two.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from ..errors import InvalidInputError
from ..poly import MultiPoly
from ..semialg import BasicSemialgebraicSet, grid_sample
from .fields import FieldHandle, evaluate_batch, jacobian_batch
from .integrate import integrate, integrate_batch

logger = logging.getLogger(__name__)

LIPSCHITZ_SAFETY = 1.05
DEFAULT_INIT_RESOLUTION = 10


def _finite_max(values: np.ndarray, what: str) -> float:
    finite = np.isfinite(values)
    if not np.all(finite):
        logger.warning(f"Excluding {int(np.sum(~finite))} non-finite samples from the {what}")
    if not np.any(finite):
        return 0.0
    return float(np.max(values[finite]))


def sup_distance(
    f: FieldHandle, g: FieldHandle, domain: BasicSemialgebraicSet, resolution: int = 50
) -> float:
    """
    Grid maximum of ||f(x) - g(x)|| over the domain.

    Raises:
        EmptyGridError: If no grid point lies in the domain

    Examples:
        >>> from polyfield.poly import MultiPoly, PolyVec
        >>> from polyfield.semialg import box_set
        >>> f = PolyVec([MultiPoly.variable(1, 0)])
        >>> g = f + PolyVec([MultiPoly.constant(1, 0.5)])
        >>> sup_distance(f, g, box_set([0], [1]), 5)
        0.5
    """
    points = grid_sample(domain, resolution=resolution).points
    with np.errstate(invalid="ignore", over="ignore"):
        gaps = np.linalg.norm(evaluate_batch(f, points) - evaluate_batch(g, points), axis=1)
    return _finite_max(gaps, "sup distance")


def trajectory_distance(
    f: FieldHandle,
    g: FieldHandle,
    domain: BasicSemialgebraicSet,
    T: float,
    resolution: int = DEFAULT_INIT_RESOLUTION,
    step: Optional[float] = None,
) -> float:
    """
    Worst state or derivative gap between the trajectories of f and g.

    Both fields are integrated from every grid point of the domain. Each pair
    is cut at the first sample where either trajectory has left the domain,
    and the distance is the maximum over the remaining samples of
    max(||x_f(t) - x_g(t)||, ||f(x_f(t)) - g(x_g(t))||).

    Args:
        f: First field
        g: Second field
        domain: Domain Omega
        T: Horizon (> 0)
        resolution: Initial-condition grid points per axis
        step: Integrator step override

    Returns:
        d_{Omega,T}(f, g); 0.0 with a warning if no sample is admissible
    """
    if T <= 0:
        raise InvalidInputError(f"Horizon must be positive, got {T}")
    inits = grid_sample(domain, resolution=resolution).points
    run_f = integrate_batch(f, inits, T, step, domain)
    run_g = integrate_batch(g, inits, T, step, domain)
    samples = run_f.times.shape[0]

    def cutoff(result) -> np.ndarray:
        cut = np.where(result.exit_index < 0, samples, result.exit_index)
        bad = ~np.all(np.isfinite(result.states), axis=2)
        first_bad = np.where(bad.any(axis=0), bad.argmax(axis=0), samples)
        return np.minimum(cut, first_bad)

    cut = np.minimum(cutoff(run_f), cutoff(run_g))
    admissible = np.arange(samples)[:, None] < cut[None, :]
    if not np.any(admissible):
        logger.warning("No admissible trajectory samples inside the domain")
        return 0.0

    n = f.n
    xf = run_f.states[admissible]
    xg = run_g.states[admissible]
    with np.errstate(invalid="ignore", over="ignore"):
        state_gap = np.linalg.norm(xf - xg, axis=1)
        rate_gap = np.linalg.norm(
            evaluate_batch(f, xf.reshape(-1, n)) - evaluate_batch(g, xg.reshape(-1, n)), axis=1
        )
    return _finite_max(np.maximum(state_gap, rate_gap), "trajectory distance")


def lipschitz_estimate(f: FieldHandle, domain: BasicSemialgebraicSet, resolution: int = 50) -> float:
    """
    Largest Jacobian spectral norm on the grid.

    This is a lower bound on the best Lipschitz constant over the domain.
    """
    points = grid_sample(domain, resolution=resolution).points
    J = jacobian_batch(f, points)
    finite = np.all(np.isfinite(J), axis=(1, 2))
    norms = np.full(points.shape[0], np.nan)
    if np.any(finite):
        norms[finite] = np.linalg.norm(J[finite], ord=2, axis=(1, 2))
    return _finite_max(norms, "Lipschitz estimate")


def gronwall_bound(T: float, L: float, s: float) -> float:
    """
    max(T e^{LT}, 1 + L T e^{LT}) * s.

    Examples:
        >>> gronwall_bound(1.0, 0.0, 1.0)
        1.0
    """
    if T < 0 or L < 0 or s < 0:
        raise InvalidInputError("Gronwall bound needs T, L, s >= 0")
    growth = math.exp(L * T)
    return max(T * growth, 1.0 + L * T * growth) * s


@dataclass
class DistanceEnvelope:
    """sup distance <= trajectory distance <= Gronwall bound, all on one grid."""

    sup: float
    trajectory: float
    lipschitz: float
    bound: float

    def to_json(self) -> Dict[str, Any]:
        return {
            "sup": self.sup,
            "trajectory": self.trajectory,
            "lipschitz": self.lipschitz,
            "bound": self.bound,
        }


def distance_envelope(
    f: FieldHandle,
    g: FieldHandle,
    domain: BasicSemialgebraicSet,
    T: float,
    resolution: int = DEFAULT_INIT_RESOLUTION,
    step: Optional[float] = None,
) -> DistanceEnvelope:
    """
    Sup distance, trajectory distance and the Gronwall bound.

    The Lipschitz constant is the larger of both fields' estimates times a
    1.05 safety factor; all grids share ``resolution``.
    """
    sup = sup_distance(f, g, domain, resolution)
    traj = trajectory_distance(f, g, domain, T, resolution, step)
    L = LIPSCHITZ_SAFETY * max(
        lipschitz_estimate(f, domain, resolution), lipschitz_estimate(g, domain, resolution)
    )
    return DistanceEnvelope(sup, traj, L, gronwall_bound(T, L, sup))


def hamiltonian_drift(
    H: MultiPoly, field: FieldHandle, x0, T: float, step: Optional[float] = None
) -> float:
    """Spread max - min of H along the trajectory of ``field`` from x0."""
    trajectory = integrate(field, x0, T, step, allow_outside=True)
    values = H.evaluate(trajectory.states)
    return float(np.max(values) - np.min(values))
