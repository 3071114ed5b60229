"""
Tests for field distances, Lipschitz estimates and energy drift.
"""

import math

import pytest

from polyfield.dynamics import (
    distance_envelope,
    gronwall_bound,
    hamiltonian_drift,
    lipschitz_estimate,
    sup_distance,
    trajectory_distance,
)
from polyfield.errors import InvalidInputError
from polyfield.poly import MultiPoly, PolyVec


def _shifted(field, dx=0.01):
    return field + PolyVec([MultiPoly.constant(2, dx), MultiPoly.zero(2)])


@pytest.mark.dynamics
class TestSupDistance:
    """Test the grid sup-norm gap."""

    def test_should_vanish_for_identical_fields(self, disease, disease_polynomial):
        assert sup_distance(disease.field, disease_polynomial, disease.domain, 11) == pytest.approx(0.0, abs=1e-15)

    def test_constant_shift_should_be_exact(self, disease_polynomial, unit_box):
        assert sup_distance(disease_polynomial, _shifted(disease_polynomial), unit_box, 5) == pytest.approx(0.01)


@pytest.mark.dynamics
class TestTrajectoryDistance:
    """Test the trajectory distance and its envelope."""

    def test_should_vanish_for_identical_fields(self, disease, disease_polynomial):
        d = trajectory_distance(disease.field, disease_polynomial, disease.domain, 1.0, 4, 0.05)
        assert d == pytest.approx(0.0, abs=1e-12)

    def test_should_reject_nonpositive_horizon(self, disease):
        with pytest.raises(InvalidInputError):
            trajectory_distance(disease.field, disease.field, disease.domain, 0.0)

    def test_sup_and_gronwall_should_sandwich_trajectory_distance(self, disease_polynomial, unit_box):
        envelope = distance_envelope(disease_polynomial, _shifted(disease_polynomial), unit_box, 2.0, 5, 0.05)
        assert envelope.sup <= envelope.trajectory + 1e-12
        assert envelope.trajectory <= envelope.bound
        assert envelope.to_json()["lipschitz"] == envelope.lipschitz

    def test_exit_should_cut_the_comparison(self, unit_box):
        """Fields that leave the box at once agree on the admissible prefix only."""
        push = PolyVec([MultiPoly.constant(2, 1.0), MultiPoly.zero(2)])
        pull = PolyVec([MultiPoly.constant(2, -1.0), MultiPoly.zero(2)])
        d = trajectory_distance(push, pull, unit_box, 1.0, 3, 0.1)
        assert d == pytest.approx(2.0)


@pytest.mark.dynamics
class TestDiagnostics:
    """Test Lipschitz, Gronwall and Hamiltonian helpers."""

    def test_lipschitz_of_linear_field_is_its_norm(self, unit_box):
        x1, x2 = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
        field = PolyVec([2.0 * x1, x2])
        assert lipschitz_estimate(field, unit_box, 3) == pytest.approx(2.0)

    def test_gronwall_should_pick_the_larger_factor(self):
        assert gronwall_bound(1.0, 0.0, 1.0) == 1.0
        assert gronwall_bound(2.0, 0.0, 1.0) == 2.0
        assert gronwall_bound(1.0, 1.0, 0.5) == pytest.approx(0.5 * (1.0 + math.e))

    def test_gronwall_should_reject_negative_inputs(self):
        with pytest.raises(InvalidInputError):
            gronwall_bound(1.0, -1.0, 1.0)

    def test_energy_should_be_conserved_by_rotation(self):
        x1, x2 = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
        H = x1 * x1 + x2 * x2
        assert hamiltonian_drift(H, PolyVec([x2, -x1]), [1.0, 0.0], 2.0, 0.01) < 1e-8

    def test_expansion_should_drift(self):
        x1, x2 = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
        H = x1 * x1 + x2 * x2
        drift = hamiltonian_drift(H, PolyVec([x1, x2]), [1.0, 0.0], 1.0, 0.01)
        assert drift == pytest.approx(math.exp(2.0) - 1.0, rel=1e-6)

    def test_pendulum_energy_should_be_nearly_constant(self, pendulum):
        q, p = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
        # 1 - cos q up to fourth order, accurate for small swings
        H = 0.5 * p * p + 0.5 * q * q - (1.0 / 24.0) * q ** 4
        drift = hamiltonian_drift(H, pendulum.field, [0.1, 0.0], 5.0, 0.01)
        assert drift < 1e-7


def _random_cubic(rng, scale=1.0):
    basis = [(i, j) for i in range(4) for j in range(4 - i)]
    return PolyVec([
        MultiPoly.from_pairs([(m, float(c)) for m, c in zip(basis, scale * rng.normal(size=len(basis)))], 2)
        for _ in range(2)
    ])


@pytest.mark.dynamics
class TestDistanceEnvelope:
    """Sup gap, trajectory gap and the Gronwall bound on random cubic pairs."""

    def test_random_pairs_should_be_sandwiched(self, rng, unit_box):
        for _ in range(20):
            f = _random_cubic(rng)
            g = f + _random_cubic(rng, scale=0.01)
            envelope = distance_envelope(f, g, unit_box, 1.0, 11, 0.01)
            assert envelope.sup - 1e-3 <= envelope.trajectory
            assert envelope.trajectory <= envelope.bound + 1e-3
