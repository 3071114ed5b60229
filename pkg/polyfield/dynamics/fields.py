"""
Vector-field handles.

Anything with ``n``, ``evaluate`` and ``jacobian`` accepting a single point
(n,) or a batch (N, n) is a field: PolyVec satisfies the protocol directly,
closed-form ground truths are wrapped in ClosedFormField.
"""

from typing import Any, Callable, Dict, Optional, Protocol, Sequence, runtime_checkable

import numpy as np

from ..errors import DimensionMismatchError

BatchFn = Callable[[np.ndarray], np.ndarray]


@runtime_checkable
class FieldHandle(Protocol):
    """Evaluable and differentiable vector field."""

    @property
    def n(self) -> int: ...

    def evaluate(self, x) -> np.ndarray: ...

    def jacobian(self, x) -> np.ndarray: ...


class ClosedFormField:
    """
    Field given by batched callables.

    Args:
        name: Identifier used in logs and provenance
        n: Dimension
        fn: Maps an (N, n) array to (N, n) field values
        jac: Maps an (N, n) array to (N, n, n) Jacobians
        params: Parameters recorded for provenance

    Examples:
        >>> rot = ClosedFormField(
        ...     "rotation", 2,
        ...     lambda X: np.stack([-X[:, 1], X[:, 0]], axis=1),
        ...     lambda X: np.broadcast_to([[0.0, -1.0], [1.0, 0.0]], (len(X), 2, 2)),
        ... )
        >>> rot.evaluate([1.0, 0.0])
        array([-0.,  1.])
    """

    def __init__(
        self,
        name: str,
        n: int,
        fn: BatchFn,
        jac: BatchFn,
        params: Optional[Dict[str, Any]] = None,
    ):
        self.name = name
        self._n = n
        self._fn = fn
        self._jac = jac
        self.params = dict(params or {})

    @property
    def n(self) -> int:
        return self._n

    def _batch(self, x) -> np.ndarray:
        points = np.asarray(x, dtype=float)
        batch = np.atleast_2d(points)
        if batch.shape[-1] != self._n:
            raise DimensionMismatchError(
                f"Field {self.name} expects {self._n} coordinates, got shape {points.shape}"
            )
        return batch

    def evaluate(self, x) -> np.ndarray:
        single = np.ndim(x) == 1
        values = np.asarray(self._fn(self._batch(x)), dtype=float)
        return values[0] if single else values

    __call__ = evaluate

    def jacobian(self, x) -> np.ndarray:
        single = np.ndim(x) == 1
        values = np.array(self._jac(self._batch(x)), dtype=float)
        return values[0] if single else values

    def __repr__(self) -> str:
        return f"ClosedFormField({self.name}, n={self._n})"


class ControlledField:
    """
    Constant-control variant f(x) - diag(u) x of a base field.
    """

    def __init__(self, base: FieldHandle, u: Sequence[float]):
        self.base = base
        self.u = np.asarray(u, dtype=float)
        if self.u.shape != (base.n,):
            raise DimensionMismatchError(f"Control must have {base.n} entries")

    @property
    def n(self) -> int:
        return self.base.n

    def evaluate(self, x) -> np.ndarray:
        points = np.asarray(x, dtype=float)
        return np.asarray(self.base.evaluate(points)) - points * self.u

    __call__ = evaluate

    def jacobian(self, x) -> np.ndarray:
        return np.asarray(self.base.jacobian(x)) - np.diag(self.u)


def evaluate_batch(field: FieldHandle, points: np.ndarray) -> np.ndarray:
    """Field values as an (N, n) array."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    return np.asarray(field.evaluate(points), dtype=float).reshape(points.shape)


def jacobian_batch(field: FieldHandle, points: np.ndarray) -> np.ndarray:
    """Jacobians as an (N, n, n) array."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    n = points.shape[1]
    return np.asarray(field.jacobian(points), dtype=float).reshape(points.shape[0], n, n)
