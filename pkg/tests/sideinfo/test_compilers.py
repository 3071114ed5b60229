"""
Tests for the candidate parameterization and the side-information compilers.
"""

import numpy as np
import pytest
from scipy import linalg

from polyfield.conic import VariableRegistry, build_program
from polyfield.errors import ConfigError, InfeasibleSideInfoError, InvalidInputError
from polyfield.poly import MultiPoly, basis_size
from polyfield.semialg import BasicSemialgebraicSet, box_set
from polyfield.sideinfo import (
    CandidateParam,
    Composite,
    CompositeTerm,
    Grad,
    Ham,
    Interp,
    Inv,
    Mon,
    MonotoneRegion,
    Pos,
    SideInfo,
    SignRegion,
    Sym,
    boundary_faces,
    compile_grad,
    compile_ham,
    compile_interp,
    compile_inv,
    compile_sym,
)


def _candidate(n=2, degree=3, fixed=None):
    registry = VariableRegistry()
    return registry, CandidateParam.declare(registry, n, degree, fixed)


@pytest.mark.sideinfo
class TestCandidateParam:
    """Test coefficient-variable declaration."""

    def test_should_declare_one_group_per_free_component(self):
        registry, candidate = _candidate(2, 3)
        assert registry.dimension == 2 * basis_size(2, 3)
        assert candidate.free_components() == [0, 1]

    def test_fixed_components_should_consume_no_variables(self):
        x2 = MultiPoly.variable(2, 1)
        registry, candidate = _candidate(2, 5, {0: x2})
        assert registry.dimension == basis_size(2, 5)
        assert candidate.is_fixed(0)
        assert candidate.component(0).is_constant()

    def test_realize_should_substitute_solution(self):
        registry, candidate = _candidate(1, 2)
        from polyfield.conic import build_program

        program = build_program(registry, [])
        field = candidate.realize(program, np.array([1.0, 2.0, 3.0]))
        assert field[0] == MultiPoly(1, {(0,): 1.0, (1,): 2.0, (2,): 3.0})


@pytest.mark.sideinfo
class TestCompileInterp:
    """Test pointwise equalities."""

    def test_should_emit_one_row_per_component(self, unit_box):
        _, candidate = _candidate()
        fragment = compile_interp(candidate, [([0.0, 0.0], [0.0, 0.0]), ([1.0, 1.0], [0.5, 0.5])], unit_box)
        assert [eq.label for eq in fragment.equalities] == ["pt0.f1", "pt0.f2", "pt1.f1", "pt1.f2"]

    def test_repeated_point_with_same_value_should_be_merged(self):
        _, candidate = _candidate()
        fragment = compile_interp(candidate, [([0.5, 0.5], [1.0, 0.0]), ([0.5, 0.5], [1.0, 0.0])])
        assert len(fragment.equalities) == 2

    def test_contradictory_values_should_be_infeasible(self):
        _, candidate = _candidate()
        with pytest.raises(InfeasibleSideInfoError) as error:
            compile_interp(candidate, [([0.5, 0.5], [1.0, 0.0]), ([0.5, 0.5], [2.0, 0.0])], name="interp1")
        assert error.value.blocks == ["interp1"]

    def test_point_outside_domain_should_be_rejected(self, unit_box):
        _, candidate = _candidate()
        with pytest.raises(InvalidInputError):
            compile_interp(candidate, [([2.0, 0.0], [0.0, 0.0])], unit_box)

    def test_fixed_component_must_match_target(self):
        _, candidate = _candidate(2, 2, {0: MultiPoly.variable(2, 1)})
        with pytest.raises(InfeasibleSideInfoError):
            compile_interp(candidate, [([0.0, 1.0], [0.0, 0.0])])
        fragment = compile_interp(candidate, [([0.0, 1.0], [1.0, 0.0])])
        assert [eq.label for eq in fragment.equalities] == ["pt0.f2"]


@pytest.mark.sideinfo
class TestCompileSym:
    """Test coefficient-wise symmetry identities."""

    def test_odd_symmetry_should_kill_even_coefficients(self):
        _, candidate = _candidate(2, 3)
        minus = -np.eye(2)
        fragment = compile_sym(candidate, [(minus, minus)])
        even = [m for m in candidate.basis if sum(m) % 2 == 0]
        assert len(fragment.equalities) == 2 * len(even)

    @staticmethod
    def _projector(generators):
        registry, candidate = _candidate(2, 3)
        A = build_program(registry, [compile_sym(candidate, generators)]).A.toarray()
        null = linalg.null_space(A)
        return null @ null.T

    def test_generator_should_imply_its_square(self, rng):
        """Imposing g alone already gives the feasible set of {g, g^2}."""
        rotation = np.array([[0.0, -1.0], [1.0, 0.0]])
        square = rotation @ rotation
        single = self._projector([(rotation, rotation)])
        closed = self._projector([(rotation, rotation), (square, square)])
        for _ in range(5):
            target = rng.normal(size=single.shape[0])
            assert np.allclose(single @ target, closed @ target, atol=1e-7)
        assert not np.allclose(single, self._projector([(square, square)]), atol=1e-7)

    def test_singular_generator_should_be_rejected(self):
        _, candidate = _candidate()
        with pytest.raises(InvalidInputError):
            compile_sym(candidate, [(np.zeros((2, 2)), np.eye(2))])


@pytest.mark.sideinfo
class TestCompileInv:
    """Test invariance faces."""

    def test_box_should_give_four_faces_without_sigma0(self, unit_box):
        faces = boundary_faces(unit_box, unit_box)
        assert len(faces) == 4
        assert all(face.substitution is not None and not face.include_sigma0 for face in faces)

    def test_box_invariance_should_use_eight_gram_blocks(self, unit_box):
        registry, candidate = _candidate(2, 3)
        blocks = compile_inv(candidate, [unit_box], 2, registry, unit_box)
        assert len(blocks) == 4
        assert sum(len(b.psd_blocks) for b in blocks) == 8

    def test_face_outside_domain_should_be_skipped(self, unit_box):
        outer = box_set([-1.0, 0.0], [2.0, 1.0])
        faces = boundary_faces(outer, unit_box)
        assert len(faces) == 2

    def test_nonlinear_boundary_should_become_equality(self, unit_box):
        x, y = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
        disc = BasicSemialgebraicSet(2, [0.25 - x * x - y * y])
        faces = boundary_faces(disc, unit_box)
        assert len(faces) == 1
        assert faces[0].substitution is None
        assert len(faces[0].set.equalities) == 1


@pytest.mark.sideinfo
class TestCompilePotentials:
    """Test gradient and Hamiltonian structure."""

    def test_grad_should_declare_potential_of_degree_plus_one(self):
        registry, candidate = _candidate(2, 2)
        before = registry.dimension
        fragment, V = compile_grad(candidate, registry)
        assert registry.dimension - before == basis_size(2, 3) - 1
        assert V.degree() == 3
        assert fragment.equalities

    def test_ham_should_reject_odd_dimension(self):
        registry, candidate = _candidate(3, 2)
        with pytest.raises(InvalidInputError):
            compile_ham(candidate, registry)

    def test_ham_rows_should_cover_every_component(self):
        registry, candidate = _candidate(2, 2)
        fragment, H = compile_ham(candidate, registry)
        labels = {eq.label.split(".")[0] for eq in fragment.equalities}
        assert labels == {"f1", "f2"}


@pytest.mark.sideinfo
class TestSideInfoJson:
    """Test the tagged JSON encoding of every family."""

    def _items(self, unit_box):
        x1 = MultiPoly.variable(2, 0)
        return [
            Interp([([0.0, 0.0], [0.0, 0.0])]),
            Sym([(-np.eye(2), -np.eye(2))]),
            Pos([SignRegion(0, [unit_box], [])], degree=4),
            Mon([MonotoneRegion(1, 0, [unit_box], [])]),
            Inv([unit_box], degree=2),
            Grad(),
            Ham(),
            Composite([CompositeTerm(x1, 0, 0), CompositeTerm(MultiPoly.constant(2, -1.0), 0)], [], [unit_box]),
        ]

    def test_every_family_should_round_trip(self, unit_box):
        for item in self._items(unit_box):
            decoded = SideInfo.from_json(item.to_json(), 2)
            assert type(decoded) is type(item)
            assert decoded.to_json() == item.to_json()

    def test_degree_should_override_default(self, unit_box):
        assert Pos([], degree=4).multiplier_degree(2) == 4
        assert Pos([]).multiplier_degree(2) == 2

    def test_unknown_tag_should_be_config_error(self):
        with pytest.raises(ConfigError):
            SideInfo.from_json({"tag": "teleport"}, 2)

    def test_malformed_entry_should_be_config_error(self):
        with pytest.raises(ConfigError):
            SideInfo.from_json({"tag": "mon", "constraints": [{"component": 0}]}, 2)
