"""
Tests for the grid residual functionals.
"""

import numpy as np
import pytest

from polyfield.errors import EmptyGridError
from polyfield.poly import MultiPoly, PolyVec
from polyfield.semialg import BasicSemialgebraicSet, box_set, halfspace
from polyfield.sideinfo import (
    CompositeTerm,
    Inv,
    Mon,
    MonotoneRegion,
    Pos,
    ResidualReport,
    SignRegion,
    fit_potential,
    residual_functional,
)
from polyfield.sideinfo.residuals import (
    residual_composite,
    residual_grad,
    residual_ham,
    residual_interp,
    residual_inv,
    residual_mon,
    residual_pos,
    residual_sym,
)
from polyfield.types import SideInfoTag

RESOLUTION = 11


def _vars():
    return MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)


@pytest.mark.sideinfo
class TestPointwiseResiduals:
    """Test Interp and Sym residuals."""

    def test_interp_should_vanish_at_equilibrium(self, disease):
        report = residual_interp(disease.field, [([0.0, 0.0], [0.0, 0.0])])
        assert report.value == 0.0
        assert report.tag == SideInfoTag.INTERP

    def test_interp_should_report_the_worst_point(self, disease):
        report = residual_interp(disease.field, [([0.0, 0.0], [0.0, 0.0]), ([0.0, 0.0], [1.0, 0.0])])
        assert report.value == pytest.approx(1.0)
        assert report.worst_point == [0.0, 0.0]

    def test_interp_without_points_is_zero(self, disease):
        assert residual_interp(disease.field, []).value == 0.0

    def test_pendulum_should_be_odd(self, pendulum):
        minus = -np.eye(2)
        report = residual_sym(pendulum.field, [(minus, minus)], pendulum.domain, RESOLUTION)
        assert report.value == pytest.approx(0.0, abs=1e-12)

    def test_disease_should_not_be_odd(self, disease):
        minus = -np.eye(2)
        report = residual_sym(disease.field, [(minus, minus)], disease.domain, RESOLUTION)
        assert report.value > 0.1


@pytest.mark.sideinfo
class TestSignResiduals:
    """Test Pos, Mon and Composite residuals."""

    def test_pos_should_measure_the_largest_violation(self, unit_box):
        x1, x2 = _vars()
        field = PolyVec([x1, -x2])
        assert residual_pos(field, [SignRegion(0, [unit_box])], unit_box, RESOLUTION).value == 0.0
        report = residual_pos(field, [SignRegion(1, [unit_box])], unit_box, RESOLUTION)
        assert report.value == pytest.approx(1.0)
        assert report.worst_point[1] == pytest.approx(1.0)

    def test_nonpos_region_should_flip_the_sign(self, unit_box):
        x1, x2 = _vars()
        field = PolyVec([x1, -x2])
        assert residual_pos(field, [SignRegion(1, [], [unit_box])], unit_box, RESOLUTION).value == 0.0

    def test_cross_infection_should_be_monotone(self, disease):
        regions = [MonotoneRegion(1, 0, [disease.domain])]
        assert residual_mon(disease.field, regions, disease.domain, RESOLUTION).value == 0.0

    def test_self_derivative_violation_should_be_a1_plus_b1(self, disease):
        """df1/dx1 = -a1 - b1 x2 is most negative at x2 = 1."""
        regions = [MonotoneRegion(0, 0, [disease.domain])]
        report = residual_mon(disease.field, regions, disease.domain, RESOLUTION)
        assert report.value == pytest.approx(0.15)

    def test_composite_should_hold_for_logistic_rate(self, unit_box):
        """N f1' - f1 = -N^2 for f1 = N (1 - N)."""
        x1, _ = _vars()
        field = PolyVec([x1 * (1 - x1), MultiPoly.zero(2)])
        terms = [CompositeTerm(x1, 0, 0), CompositeTerm(MultiPoly.constant(2, -1.0), 0)]
        assert residual_composite(field, terms, [], [unit_box], unit_box, RESOLUTION).value == 0.0
        flipped = residual_composite(field, terms, [unit_box], [], unit_box, RESOLUTION)
        assert flipped.value == pytest.approx(1.0)

    def test_degenerate_segment_should_be_sampled(self):
        """f1 = x1 on [-1, 0] x {0} is most negative at (-1, 0)."""
        x1, x2 = _vars()
        segment = BasicSemialgebraicSet(2, [x1 + 1, -x1], [x2], None, ((-1.0, 0.0), (0.0, 0.0)))
        field = PolyVec([x1, MultiPoly.zero(2)])
        domain = box_set([-1.0, -1.0], [1.0, 1.0])
        report = residual_pos(field, [SignRegion(0, [segment])], domain, RESOLUTION)
        assert report.value == pytest.approx(1.0)
        assert report.worst_point == pytest.approx([-1.0, 0.0])

    def test_region_without_bounds_should_use_domain_box(self, unit_box):
        x1, x2 = _vars()
        field = PolyVec([x1 - x2, x2])
        upper = halfspace([1.0, -1.0])
        assert residual_pos(field, [SignRegion(0, [upper])], unit_box, RESOLUTION).value == 0.0


@pytest.mark.sideinfo
class TestInvarianceResidual:
    """Test the boundary inner-product residual."""

    def test_disease_should_keep_the_unit_square(self, disease):
        report = residual_inv(disease.field, [disease.domain], disease.domain, RESOLUTION)
        assert report.value == pytest.approx(0.0, abs=1e-12)

    def test_constant_drift_should_leave_through_one_face(self, unit_box):
        field = PolyVec([MultiPoly.constant(2, 1.0), MultiPoly.zero(2)])
        report = residual_inv(field, [unit_box], unit_box, RESOLUTION)
        assert report.value == pytest.approx(1.0)
        assert report.worst_point[0] == pytest.approx(1.0)

    def test_faces_missing_the_grid_should_raise(self, unit_box):
        x, y = _vars()
        circle = BasicSemialgebraicSet(2, [0.3 - x * x - y * y])
        with pytest.raises(EmptyGridError):
            residual_inv(PolyVec([x, y]), [circle], unit_box, 4)


@pytest.mark.sideinfo
class TestGridRefinement:
    """Doubling the resolution never lowers a sign, monotonicity or invariance residual."""

    @staticmethod
    def _random_field(rng):
        basis = [(i, j) for i in range(4) for j in range(4 - i)]
        components = []
        for _ in range(2):
            coefficients = rng.normal(size=len(basis))
            components.append(MultiPoly.from_pairs([(m, float(c)) for m, c in zip(basis, coefficients)], 2))
        return PolyVec(components)

    @pytest.mark.parametrize("k", [2, 3, 5, 8])
    def test_pos_mon_and_inv_should_grow_with_resolution(self, rng, unit_box, k):
        items = [
            Pos([SignRegion(0, [unit_box], []), SignRegion(1, [], [unit_box])]),
            Mon([MonotoneRegion(0, 1, [unit_box]), MonotoneRegion(1, 0, [], [unit_box])]),
            Inv([unit_box]),
        ]
        for _ in range(5):
            field = self._random_field(rng)
            for item in items:
                coarse = residual_functional(field, item, unit_box, k).value
                fine = residual_functional(field, item, unit_box, 2 * k).value
                assert fine >= coarse - 1e-12


@pytest.mark.sideinfo
class TestPotentialResiduals:
    """Test the least-squares potential fits."""

    def test_gradient_field_should_fit_exactly(self, unit_box):
        x1, x2 = _vars()
        V = x1 * x1 + x1 * x2
        field = PolyVec([-V.differentiate(0), -V.differentiate(1)])
        assert residual_grad(field, unit_box, RESOLUTION).value == pytest.approx(0.0, abs=1e-8)

    def test_rotation_should_not_be_a_gradient(self, unit_box):
        x1, x2 = _vars()
        report = residual_grad(PolyVec([-x2, x1]), unit_box, RESOLUTION)
        assert report.value > 0.1

    def test_harmonic_oscillator_should_be_hamiltonian(self, unit_box):
        x1, x2 = _vars()
        report = residual_ham(PolyVec([x2, -x1]), unit_box, RESOLUTION)
        assert report.value == pytest.approx(0.0, abs=1e-8)

    def test_expansion_should_not_be_hamiltonian(self, unit_box):
        x1, x2 = _vars()
        assert residual_ham(PolyVec([x1, x2]), unit_box, RESOLUTION).value > 0.1

    def test_fitted_potential_should_match_up_to_constant(self, unit_box):
        x1, x2 = _vars()
        V = x1 * x1 + x1 * x2
        field = PolyVec([-V.differentiate(0), -V.differentiate(1)])
        potential, grid, per_point = fit_potential(field, unit_box, RESOLUTION, False)
        assert potential.allclose(V, 1e-8)
        assert len(per_point) == len(grid)


@pytest.mark.sideinfo
class TestResidualFunctional:
    """Test dispatch through side-information items."""

    def test_should_dispatch_on_item(self, disease):
        item = Mon([MonotoneRegion(0, 0, [disease.domain])])
        report = residual_functional(disease.field, item, disease.domain, RESOLUTION)
        assert report.tag == SideInfoTag.MON
        assert report.value == pytest.approx(0.15)
        assert report.satisfied(0.2)
        assert not report.satisfied(0.1)

    def test_report_should_serialize(self, disease):
        report = residual_functional(disease.field, Inv([disease.domain]), disease.domain, RESOLUTION)
        data = report.to_json()
        assert data["tag"] == "inv"
        assert data["resolution"] == RESOLUTION

    def test_unchecked_report_should_never_be_satisfied(self):
        report = ResidualReport.not_evaluated(SideInfoTag.INV, 10, "no grid point on any face")
        assert not report.checked
        assert not report.satisfied(1.0)
        data = report.to_json()
        assert data["value"] is None
        assert data["unchecked"] == "no grid point on any face"
        assert not ResidualReport.from_json(data).checked

    def test_sampling_box_can_differ_from_domain(self, disease):
        small = box_set([0.0, 0.0], [0.5, 0.5])
        item = Mon([MonotoneRegion(0, 0, [small])])
        report = residual_functional(disease.field, item, disease.domain, RESOLUTION)
        assert report.value == pytest.approx(0.1)
