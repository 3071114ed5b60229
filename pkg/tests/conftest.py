"""
Pytest configuration and shared fixtures for the polyfield tests.

This module provides the configuration manager, the standard domains, the
ground-truth models and small seeded datasets used across test modules.
"""

import numpy as np
import pytest

from polyfield import ConfigurationManager
from polyfield.dynamics import sample_dataset, uniform_schedule
from polyfield.experiments import ground_truth
from polyfield.poly import MultiPoly, PolyVec
from polyfield.semialg import box_set


@pytest.fixture(scope="function")
def config_manager():
    """Provide a clean ConfigurationManager instance for each test."""
    manager = ConfigurationManager.get_instance()
    manager.reset()
    yield manager
    manager.reset()


@pytest.fixture(scope="function")
def test_config():
    """Provide test configuration data."""
    return {
        "solver_backend": "cvxopt",
        "gap_tol": 1e-9,
        "feas_tol": 1e-9,
        "max_iters": 150,
        "multiplier_degree": 4,
        "integrator_step": 1e-2,
        "residual_resolution": 30,
        "residual_delta": 1e-4,
        "verbose": True,
    }


@pytest.fixture(scope="function")
def unit_box():
    """The unit square [0, 1]^2."""
    return box_set([0.0, 0.0], [1.0, 1.0])


@pytest.fixture(scope="function")
def unit_interval():
    return box_set([0.0], [1.0])


@pytest.fixture(scope="session")
def disease():
    """Two-group disease model on [0, 1]^2."""
    return ground_truth("disease")


@pytest.fixture(scope="session")
def pendulum():
    return ground_truth("pendulum")


@pytest.fixture(scope="session")
def tumor():
    return ground_truth("tumor")


@pytest.fixture(scope="session")
def disease_polynomial():
    """The disease field written as a PolyVec with the default parameters."""
    x1, x2 = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
    return PolyVec(
        [
            -0.05 * x1 + 0.1 * (1 - x1) * x2,
            -0.05 * x2 + 0.1 * (1 - x2) * x1,
        ]
    )


@pytest.fixture(scope="session")
def disease_data(disease):
    """Single trajectory from (0.7, 0.3), 20 unit-spaced samples, noise 1e-4."""
    return sample_dataset(
        disease.field, [uniform_schedule([0.7, 0.3], 20, 1.0)], 1e-4, seed=0, generator="disease"
    )


@pytest.fixture(scope="session")
def noiseless_disease_data(disease):
    schedule = [
        uniform_schedule([0.7, 0.3], 10, 1.0),
        uniform_schedule([0.2, 0.8], 10, 1.0),
    ]
    return sample_dataset(disease.field, schedule, 0.0, seed=0, generator="disease")


@pytest.fixture(scope="function")
def rng():
    return np.random.default_rng(1234)
