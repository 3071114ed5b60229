"""
Fixed-step classical Runge-Kutta integration.

The step is the largest value <= the requested step that divides the
horizon evenly, so every run with the same (field, x0, T, step) produces
bitwise identical states.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from ..config import current_config
from ..errors import DimensionMismatchError, DivergenceError, InvalidInputError
from ..semialg import BasicSemialgebraicSet, membership_mask
from .fields import FieldHandle, evaluate_batch

logger = logging.getLogger(__name__)

EXIT_TOL = 1e-9


@dataclass
class Trajectory:
    """
    Sampled solution x(t, x0).

    Attributes:
        times: Strictly increasing sample times, starting at 0
        states: Array (len(times), n)
        exited_at: First sample time outside the domain, if any
    """

    times: np.ndarray
    states: np.ndarray
    exited_at: Optional[float] = None

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.states = np.atleast_2d(np.asarray(self.states, dtype=float))
        if self.states.shape[0] != self.times.shape[0]:
            raise DimensionMismatchError(
                f"{self.times.shape[0]} times but {self.states.shape[0]} states"
            )
        if np.any(np.diff(self.times) <= 0):
            raise InvalidInputError("Trajectory times must be strictly increasing")

    def __len__(self) -> int:
        return self.times.shape[0]

    @property
    def n(self) -> int:
        return self.states.shape[1]

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def admissible(self) -> "Trajectory":
        """Prefix strictly before the first domain exit."""
        if self.exited_at is None:
            return self
        keep = self.times < self.exited_at
        return Trajectory(self.times[keep], self.states[keep])


@dataclass
class BatchResult:
    """
    Result of integrating many initial conditions with a shared step.

    ``exit_index`` holds the first sample index outside the domain (-1 when
    the trajectory never leaves); ``diverged`` marks rows whose state became
    non-finite, with ``last_finite``/``last_time`` the state and time just
    before that happened.
    """

    times: np.ndarray
    final: np.ndarray
    exit_index: np.ndarray
    diverged: np.ndarray
    last_finite: np.ndarray
    last_time: np.ndarray
    states: Optional[np.ndarray] = None

    def trajectory(self, i: int) -> Trajectory:
        if self.states is None:
            raise InvalidInputError("Batch was integrated without recording states")
        k = int(self.exit_index[i])
        exited = None if k < 0 else float(self.times[k])
        return Trajectory(self.times, self.states[:, i, :], exited)

    def trajectories(self) -> List[Trajectory]:
        return [self.trajectory(i) for i in range(self.final.shape[0])]


def step_schedule(T: float, step: Optional[float] = None):
    """
    Number of steps and the effective step for horizon T.

    Returns:
        Tuple (steps, h); (0, 0.0) when T == 0
    """
    if T < 0:
        raise InvalidInputError(f"Horizon must be nonnegative, got {T}")
    h = current_config().integrator_step if step is None else float(step)
    if h <= 0:
        raise InvalidInputError(f"Integration step must be positive, got {h}")
    if T == 0:
        return 0, 0.0
    steps = max(1, math.ceil(T / h - 1e-9))
    return steps, T / steps


def _rk4(field: FieldHandle, X: np.ndarray, h: float) -> np.ndarray:
    k1 = evaluate_batch(field, X)
    k2 = evaluate_batch(field, X + 0.5 * h * k1)
    k3 = evaluate_batch(field, X + 0.5 * h * k2)
    k4 = evaluate_batch(field, X + h * k3)
    return X + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate_batch(
    field: FieldHandle,
    X0,
    T: float,
    step: Optional[float] = None,
    domain: Optional[BasicSemialgebraicSet] = None,
    record: bool = True,
    exit_tol: float = EXIT_TOL,
) -> BatchResult:
    """
    Integrate every row of X0 with RK4 over [0, T].

    Diverged rows are frozen at NaN and reported instead of raising, so one
    blow-up does not abort a whole grid.

    Args:
        field: Vector field handle
        X0: Initial conditions, shape (M, n)
        T: Horizon (>= 0)
        step: Requested step; defaults to the configured integrator step
        domain: Optional domain for exit detection
        record: Keep every sample (memory M * steps * n)
        exit_tol: Membership tolerance for exit detection

    Returns:
        BatchResult
    """
    X = np.atleast_2d(np.array(X0, dtype=float))
    if X.shape[1] != field.n:
        raise DimensionMismatchError(f"Initial conditions need {field.n} coordinates")
    steps, h = step_schedule(T, step)
    M = X.shape[0]
    times = np.linspace(0.0, T, steps + 1) if steps else np.zeros(1)

    exit_index = np.full(M, -1, dtype=int)
    diverged = np.zeros(M, dtype=bool)
    last_finite = X.copy()
    last_time = np.zeros(M)
    states = np.empty((steps + 1, M, X.shape[1])) if record else None

    def observe(k: int, current: np.ndarray) -> None:
        if domain is None:
            return
        live = (exit_index < 0) & ~diverged
        if np.any(live):
            inside = membership_mask(domain, current[live], exit_tol)
            rows = np.flatnonzero(live)[~inside]
            exit_index[rows] = k

    if states is not None:
        states[0] = X
    observe(0, X)
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, steps + 1):
            X = _rk4(field, X, h)
            bad = ~np.all(np.isfinite(X), axis=1) & ~diverged
            if np.any(bad):
                diverged |= bad
                X[bad] = np.nan
            ok = ~diverged
            last_finite[ok] = X[ok]
            last_time[ok] = times[k]
            if states is not None:
                states[k] = X
            observe(k, X)

    if np.any(diverged):
        logger.debug(f"{int(diverged.sum())} of {M} trajectories diverged")
    return BatchResult(times, X, exit_index, diverged, last_finite, last_time, states)


def integrate(
    field: FieldHandle,
    x0,
    T: float,
    step: Optional[float] = None,
    domain: Optional[BasicSemialgebraicSet] = None,
    allow_outside: bool = False,
    exit_tol: float = EXIT_TOL,
) -> Trajectory:
    """
    Integrate x' = f(x) from x0 over [0, T] with fixed-step RK4.

    Args:
        field: Vector field handle
        x0: Initial condition
        T: Horizon (>= 0); T == 0 yields the single state x0
        step: Requested step h; defaults to the configured integrator step
        domain: Domain used for exit detection
        allow_outside: Accept an initial condition outside the domain
        exit_tol: Membership tolerance for exit detection

    Returns:
        Trajectory with exited_at set to the first sample outside the domain

    Raises:
        InvalidInputError: If T < 0 or x0 lies outside the domain
        DivergenceError: If the state becomes non-finite

    Examples:
        >>> from polyfield.poly import MultiPoly, PolyVec
        >>> decay = PolyVec([MultiPoly.variable(1, 0) * -1.0])
        >>> round(float(integrate(decay, [1.0], 1.0).final_state[0]), 6)
        0.367879
    """
    x0 = np.asarray(x0, dtype=float)
    if domain is not None and not allow_outside and not domain.contains(x0, exit_tol):
        raise InvalidInputError(f"Initial condition {x0.tolist()} lies outside the domain")
    result = integrate_batch(field, x0[None, :], T, step, domain, True, exit_tol)
    if result.diverged[0]:
        raise DivergenceError(
            f"Integration diverged after t={result.last_time[0]:g}",
            last_state=result.last_finite[0].copy(),
            last_time=float(result.last_time[0]),
        )
    return result.trajectory(0)
