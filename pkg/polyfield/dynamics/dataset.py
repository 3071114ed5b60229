"""
Training sets {(x_i, y_i)} synthesized from a field and a sampling schedule.
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import DimensionMismatchError, InvalidInputError
from .fields import FieldHandle, evaluate_batch
from .integrate import integrate

logger = logging.getLogger(__name__)

EXACT = "exact"
CENTRAL_DIFFERENCE = "central-difference"


@dataclass
class ScheduleEntry:
    """One trajectory started at x0 and observed at the given times."""

    x0: List[float]
    times: List[float]

    def __post_init__(self):
        if np.any(np.diff(self.times) < 0) or (self.times and self.times[0] < 0):
            raise InvalidInputError("Sample times must be nonnegative and nondecreasing")


def uniform_schedule(x0: Sequence[float], count: int, spacing: float, start: int = 1) -> ScheduleEntry:
    """
    Samples at t_i = i * spacing for i = start .. start + count - 1.

    Examples:
        >>> uniform_schedule([0.7, 0.3], 3, 1.0).times
        [1.0, 2.0, 3.0]
    """
    return ScheduleEntry(list(map(float, x0)), [float(i * spacing) for i in range(start, start + count)])


@dataclass
class Provenance:
    """Everything needed to regenerate a dataset."""

    generator: str
    noise: float
    seed: Optional[int]
    derivative: str = EXACT
    state_noise: bool = False
    triplet: bool = False
    extra: Dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(eq=False)
class Dataset:
    """
    Pairs (x_i, y_i) stored as two (N, n) arrays.

    An empty dataset still knows its dimension.
    """

    xs: np.ndarray
    ys: np.ndarray
    provenance: Optional[Provenance] = None

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=float)
        self.ys = np.asarray(self.ys, dtype=float)
        if self.xs.ndim != 2 or self.xs.shape != self.ys.shape:
            raise DimensionMismatchError(
                f"Inputs {self.xs.shape} and outputs {self.ys.shape} must both be (N, n)"
            )

    @classmethod
    def empty(cls, n: int) -> "Dataset":
        return cls(np.zeros((0, n)), np.zeros((0, n)))

    @classmethod
    def from_pairs(cls, pairs: Sequence[Tuple[Sequence[float], Sequence[float]]], n: Optional[int] = None) -> "Dataset":
        if not pairs:
            if n is None:
                raise InvalidInputError("Dimension required for an empty dataset")
            return cls.empty(n)
        return cls(np.array([p[0] for p in pairs]), np.array([p[1] for p in pairs]))

    @property
    def n(self) -> int:
        return self.xs.shape[1]

    @property
    def pairs(self) -> List[Tuple[np.ndarray, np.ndarray]]:
        return list(zip(self.xs, self.ys))

    def __len__(self) -> int:
        return self.xs.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            np.array_equal(self.xs, other.xs)
            and np.array_equal(self.ys, other.ys)
            and self.provenance == other.provenance
        )


class _Reversed:
    def __init__(self, base: FieldHandle):
        self.base = base

    @property
    def n(self) -> int:
        return self.base.n

    def evaluate(self, x):
        return -np.asarray(self.base.evaluate(x))

    def jacobian(self, x):
        return -np.asarray(self.base.jacobian(x))


def _observed_states(field: FieldHandle, entry: ScheduleEntry, step: Optional[float]) -> np.ndarray:
    x = np.asarray(entry.x0, dtype=float)
    if x.shape != (field.n,):
        raise DimensionMismatchError(f"Initial condition needs {field.n} coordinates")
    states, t = [], 0.0
    for target in entry.times:
        if target > t:
            x = integrate(field, x, target - t, step, allow_outside=True).final_state
            t = target
        states.append(x.copy())
    return np.array(states).reshape(-1, field.n)


def _central_difference(field: FieldHandle, states: np.ndarray, delta: float, step: Optional[float]) -> np.ndarray:
    backward = _Reversed(field)
    h = min(delta / 4, step) if step else delta / 4
    rows = []
    for x in states:
        ahead = integrate(field, x, delta, h, allow_outside=True).final_state
        behind = integrate(backward, x, delta, h, allow_outside=True).final_state
        rows.append((ahead - behind) / (2 * delta))
    return np.array(rows).reshape(states.shape)


def sample_dataset(
    field: FieldHandle,
    schedule: Sequence[ScheduleEntry],
    noise: float,
    seed: Optional[int] = None,
    *,
    generator: Optional[str] = None,
    state_noise: bool = False,
    triplet: bool = False,
    derivative: str = EXACT,
    difference_step: float = 1e-3,
    step: Optional[float] = None,
) -> Dataset:
    """
    Observe trajectories of a field and record noisy derivatives.

    x_i is the integrated state at each scheduled time and
    y_i = f(x_i) + noise * eps_i with eps_i standard normal, drawn from a
    generator seeded with ``seed`` in schedule order.

    In triplet mode (second-order systems x = (q, q'), n == 2) the sample
    (q, q', q'') is perturbed as a whole and mapped to the pair
    ((q, q'), (q', q'')), so the noisy q' appears in both input and output.

    Args:
        field: Ground truth
        schedule: Trajectories and observation times
        noise: Standard deviation of the additive noise
        seed: Seed for numpy's default_rng
        generator: Name recorded in the provenance
        state_noise: Perturb the observed states as well
        triplet: Use the (q, q', q'') representation
        derivative: "exact" or "central-difference"
        difference_step: Half-width of the central difference in time
        step: Integrator step override

    Returns:
        Dataset with provenance

    Raises:
        InvalidInputError: If the schedule is empty or options conflict
        DivergenceError: If a trajectory diverges

    Examples:
        >>> from polyfield.poly import MultiPoly, PolyVec
        >>> decay = PolyVec([MultiPoly.variable(1, 0) * -1.0])
        >>> data = sample_dataset(decay, [uniform_schedule([1.0], 3, 0.5)], 0.0)
        >>> len(data)
        3
    """
    if not schedule:
        raise InvalidInputError("Sampling schedule is empty")
    if noise < 0:
        raise InvalidInputError(f"Noise scale must be nonnegative, got {noise}")
    if derivative not in (EXACT, CENTRAL_DIFFERENCE):
        raise InvalidInputError(f"Unknown derivative mode {derivative!r}")
    if triplet and field.n != 2:
        raise InvalidInputError("Triplet sampling needs a planar second-order system")

    rng = np.random.default_rng(seed)
    xs_all, ys_all = [], []
    for entry in schedule:
        states = _observed_states(field, entry, step)
        if derivative == EXACT:
            rates = evaluate_batch(field, states)
        else:
            rates = _central_difference(field, states, difference_step, step)
        for x, y in zip(states, rates):
            if triplet:
                sample = np.array([x[0], x[1], y[1]]) + noise * rng.standard_normal(3)
                xs_all.append(sample[:2])
                ys_all.append(sample[1:])
                continue
            eps = rng.standard_normal(field.n)
            if state_noise:
                x = x + noise * rng.standard_normal(field.n)
            xs_all.append(x)
            ys_all.append(y + noise * eps)

    provenance = Provenance(
        generator or getattr(field, "name", type(field).__name__),
        float(noise),
        seed,
        derivative,
        state_noise,
        triplet,
    )
    data = Dataset(np.array(xs_all), np.array(ys_all), provenance)
    logger.info(f"Sampled {len(data)} pairs from {provenance.generator} (noise={noise:g}, seed={seed})")
    return data
