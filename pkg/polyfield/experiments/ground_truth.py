"""
Named closed-form ground truths with their domains.

Each model is an exact evaluator with an analytic Jacobian; the pendulum
keeps its sine and the tumor model its fractional powers, so neither is a
polynomial.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, Mapping, Optional, Tuple

import numpy as np

from ..dynamics import ClosedFormField, ControlledField, FieldHandle
from ..errors import ConfigError
from ..semialg import BasicSemialgebraicSet, box_set

logger = logging.getLogger(__name__)

DISEASE_PARAMS = {"a1": 0.05, "b1": 0.1, "a2": 0.05, "b2": 0.1}
PENDULUM_PARAMS = {"g": 1.0, "l": 1.0, "m": 1.0}
TUMOR_PARAMS = {"mu": 0.1, "nu": 0.5, "gamma": 0.1, "omega": 0.2}
CONTROLLED_PARAMS = {**DISEASE_PARAMS, "u1": 0.0, "u2": 0.0}


@dataclass
class GroundTruthModel:
    """A ground-truth field, its parameters and its domain."""

    id: str
    params: Dict[str, float]
    field: FieldHandle
    domain: BasicSemialgebraicSet

    def __iter__(self):
        return iter((self.field, self.domain))


def _disease(p: Mapping[str, float]) -> ClosedFormField:
    a1, b1, a2, b2 = p["a1"], p["b1"], p["a2"], p["b2"]

    def fn(X):
        x1, x2 = X[:, 0], X[:, 1]
        return np.stack([-a1 * x1 + b1 * (1 - x1) * x2, -a2 * x2 + b2 * (1 - x2) * x1], axis=1)

    def jac(X):
        x1, x2 = X[:, 0], X[:, 1]
        J = np.empty((len(X), 2, 2))
        J[:, 0, 0] = -a1 - b1 * x2
        J[:, 0, 1] = b1 * (1 - x1)
        J[:, 1, 0] = b2 * (1 - x2)
        J[:, 1, 1] = -a2 - b2 * x1
        return J

    return ClosedFormField("disease", 2, fn, jac, dict(p))


def _pendulum(p: Mapping[str, float]) -> ClosedFormField:
    ratio = p["g"] / p["l"]

    def fn(X):
        return np.stack([X[:, 1], -ratio * np.sin(X[:, 0])], axis=1)

    def jac(X):
        J = np.zeros((len(X), 2, 2))
        J[:, 0, 1] = 1.0
        J[:, 1, 0] = -ratio * np.cos(X[:, 0])
        return J

    return ClosedFormField("pendulum", 2, fn, jac, dict(p))


def _tumor(p: Mapping[str, float]) -> ClosedFormField:
    mu, nu, gamma, omega = p["mu"], p["nu"], p["gamma"], p["omega"]

    def fn(X):
        N, K = X[:, 0], X[:, 1]
        with np.errstate(divide="ignore", invalid="ignore"):
            growth = (mu / nu) * N * (1 - np.power(N / K, nu))
            feedback = omega * N - gamma * np.cbrt(N * N) * K
        return np.stack([growth, feedback], axis=1)

    def jac(X):
        N, K = X[:, 0], X[:, 1]
        J = np.empty((len(X), 2, 2))
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.power(N / K, nu)
            J[:, 0, 0] = (mu / nu) * (1 - (nu + 1) * ratio)
            J[:, 0, 1] = mu * N * ratio / K
            J[:, 1, 0] = omega - (2.0 / 3.0) * gamma * K / np.cbrt(N)
            J[:, 1, 1] = -gamma * np.cbrt(N * N)
        return J

    return ClosedFormField("tumor", 2, fn, jac, dict(p))


def _controlled(p: Mapping[str, float]) -> ControlledField:
    base = _disease(p)
    controlled = ControlledField(base, [p["u1"], p["u2"]])
    controlled.name = "disease_controlled"
    return controlled


_MODELS: Dict[str, Tuple[Dict[str, float], Callable, Tuple[float, float]]] = {
    "disease": (DISEASE_PARAMS, _disease, (0.0, 1.0)),
    "pendulum": (PENDULUM_PARAMS, _pendulum, (-math.pi, math.pi)),
    "tumor": (TUMOR_PARAMS, _tumor, (0.0, 2.0)),
    "disease_controlled": (CONTROLLED_PARAMS, _controlled, (0.0, 1.0)),
}


def available_models():
    return sorted(_MODELS)


def ground_truth(model_id: str, params: Optional[Mapping[str, Any]] = None) -> GroundTruthModel:
    """
    Look up a ground-truth model.

    Args:
        model_id: One of disease, pendulum, tumor, disease_controlled
        params: Overrides of the default parameters

    Returns:
        GroundTruthModel with the closed-form field and its domain

    Raises:
        ConfigError: For an unknown id, unknown parameter or nonpositive
            parameter where positivity is required

    Examples:
        >>> truth = ground_truth("disease")
        >>> [round(float(v), 6) for v in truth.field.evaluate([0.7, 0.3])]
        [-0.026, 0.034]
    """
    if model_id not in _MODELS:
        raise ConfigError(f"Unknown model {model_id!r}; available: {available_models()}")
    defaults, build, (lo, hi) = _MODELS[model_id]
    merged = dict(defaults)
    for key, value in (params or {}).items():
        if key not in defaults:
            raise ConfigError(f"Model {model_id} has no parameter {key!r}")
        merged[key] = float(value)
    for key, value in merged.items():
        if key in ("u1", "u2"):
            if value < 0:
                raise ConfigError(f"Control {key} must be nonnegative, got {value}")
        elif value <= 0:
            raise ConfigError(f"Parameter {key} of {model_id} must be positive, got {value}")
    logger.debug(f"Ground truth {model_id} with {merged}")
    return GroundTruthModel(model_id, merged, build(merged), box_set([lo, lo], [hi, hi]))
