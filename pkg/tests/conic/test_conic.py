"""
Tests for conic program assembly, the cvxopt backend and the standard form.
"""

import io
import time

import numpy as np
import pytest

pytest.importorskip("cvxopt.solvers")

from polyfield.conic import (
    SQRT2,
    Fragment,
    VariableRegistry,
    build_program,
    eliminate_free,
    export_standard_form,
    import_standard_form,
    parse_standard_form,
    presolve,
    smat,
    solve,
    svec,
    svec_position,
)
from polyfield.errors import InvalidInputError, ProgramError
from polyfield.types import ConeKind, SolverOptions, SolveStatus


def _correlation_program():
    """min X12 subject to X11 = X22 = 1, X PSD."""
    registry = VariableRegistry()
    registry.declare("X", ConeKind.PSD, 2)
    frag = Fragment("diag")
    frag.add_equality({registry.psd_entry("X", 0, 0)[0]: 1.0}, 1.0, "x11")
    frag.add_equality({registry.psd_entry("X", 1, 1)[0]: 1.0}, 1.0, "x22")
    idx, factor = registry.psd_entry("X", 0, 1)
    return build_program(registry, [frag], {idx: factor})


def _soc_program():
    """min t subject to (t, 3, 4) in the second-order cone."""
    registry = VariableRegistry()
    registry.declare("cone", ConeKind.SOC, 3)
    frag = Fragment("fix")
    frag.add_equality({1: 1.0}, 3.0, "a")
    frag.add_equality({2: 1.0}, 4.0, "b")
    return build_program(registry, [frag], {0: 1.0})


@pytest.mark.conic
class TestSvec:
    """Test the scaled upper-triangle packing."""

    def test_should_preserve_inner_products(self, rng):
        A = rng.normal(size=(3, 3))
        B = rng.normal(size=(3, 3))
        A, B = A + A.T, B + B.T
        assert svec(A) @ svec(B) == pytest.approx(np.trace(A @ B))

    def test_smat_should_invert_svec(self, rng):
        A = rng.normal(size=(4, 4))
        A = A + A.T
        np.testing.assert_allclose(smat(svec(A), 4), A)

    def test_positions_should_be_row_major_upper_triangle(self):
        assert [svec_position(3, i, j) for i, j in [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]] == list(
            range(6)
        )
        assert svec_position(3, 2, 1) == svec_position(3, 1, 2)


@pytest.mark.conic
class TestVariableRegistry:
    """Test group declarations."""

    def test_should_lay_out_groups_contiguously(self):
        registry = VariableRegistry()
        a = registry.declare("a", ConeKind.FREE, 2)
        Q = registry.declare("Q", ConeKind.PSD, 3)
        assert a.offset == 0
        assert Q.offset == 2
        assert registry.dimension == 8

    def test_redeclaring_identically_should_return_same_group(self):
        registry = VariableRegistry()
        first = registry.declare("a", ConeKind.NONNEG, 2)
        assert registry.declare("a", ConeKind.NONNEG, 2) == first
        with pytest.raises(ProgramError):
            registry.declare("a", ConeKind.FREE, 2)

    def test_should_reject_names_with_whitespace(self):
        with pytest.raises(ProgramError):
            VariableRegistry().declare("bad name", ConeKind.FREE, 1)

    def test_fresh_name_should_avoid_collisions(self):
        registry = VariableRegistry()
        registry.declare("sos", ConeKind.PSD, 1)
        assert registry.fresh_name("sos") == "sos#1"
        assert registry.fresh_name("other") == "other"

    def test_psd_entry_should_scale_off_diagonals(self):
        registry = VariableRegistry()
        registry.declare("X", ConeKind.PSD, 2)
        assert registry.psd_entry("X", 1, 0) == (1, 1.0 / SQRT2)
        assert registry.psd_entry("X", 1, 1) == (2, 1.0)


@pytest.mark.conic
class TestBuildProgram:
    """Test fragment assembly."""

    def test_should_label_rows_with_fragment_name(self):
        program = _soc_program()
        assert program.row_labels == ("fix:a", "fix:b")
        assert program.num_variables == 3

    def test_should_reject_undeclared_slots(self):
        registry = VariableRegistry()
        registry.declare("x", ConeKind.FREE, 1)
        frag = Fragment("bad")
        frag.add_equality({3: 1.0}, 0.0, "oops")
        with pytest.raises(ProgramError):
            build_program(registry, [frag])


@pytest.mark.conic
class TestSolve:
    """Test the analytic reference problems and failure statuses."""

    def test_nonnegative_lp_should_reach_zero(self):
        registry = VariableRegistry()
        registry.declare("x", ConeKind.NONNEG, 1)
        start = time.perf_counter()
        solution = solve(build_program(registry, [], {0: 1.0}))
        assert time.perf_counter() - start < 0.1
        assert solution.is_optimal
        assert solution.primal_objective == pytest.approx(0.0, abs=1e-7)

    def test_correlation_psd_should_reach_minus_one(self):
        start = time.perf_counter()
        solution = solve(_correlation_program())
        assert time.perf_counter() - start < 0.1
        assert solution.is_optimal
        assert solution.primal_objective == pytest.approx(-1.0, abs=1e-7)

    def test_second_order_cone_should_reach_norm(self):
        start = time.perf_counter()
        solution = solve(_soc_program())
        assert time.perf_counter() - start < 0.1
        assert solution.is_optimal
        assert solution.primal_objective == pytest.approx(5.0, abs=1e-7)

    def test_rotated_cone_should_bound_product(self):
        """min u subject to 2 u v >= w^2, v = 1/2, w = 2 gives u = 4."""
        registry = VariableRegistry()
        registry.declare("r", ConeKind.RSOC, 3)
        frag = Fragment("fix")
        frag.add_equality({1: 1.0}, 0.5, "v")
        frag.add_equality({2: 1.0}, 2.0, "w")
        solution = solve(build_program(registry, [frag], {0: 1.0}))
        assert solution.primal_objective == pytest.approx(4.0, abs=1e-6)

    def test_inconsistent_equalities_should_name_rows(self):
        registry = VariableRegistry()
        registry.declare("x", ConeKind.FREE, 1)
        registry.declare("s", ConeKind.NONNEG, 1)
        frag = Fragment("clash")
        frag.add_equality({0: 1.0}, 1.0, "one")
        frag.add_equality({0: 1.0}, 2.0, "two")
        solution = solve(build_program(registry, [frag], {1: 1.0}))
        assert solution.status == SolveStatus.PRIMAL_INFEASIBLE
        assert solution.infeasible_rows
        assert all(label.startswith("clash:") for label in solution.infeasible_rows)

    def test_negative_nonnegative_variable_should_be_infeasible(self):
        registry = VariableRegistry()
        registry.declare("x", ConeKind.NONNEG, 1)
        frag = Fragment("neg")
        frag.add_equality({0: 1.0}, -1.0, "x")
        solution = solve(build_program(registry, [frag], {0: 1.0}))
        assert solution.status == SolveStatus.PRIMAL_INFEASIBLE

    def test_unconstrained_free_direction_with_cost_is_unbounded(self):
        registry = VariableRegistry()
        registry.declare("x", ConeKind.FREE, 1)
        registry.declare("s", ConeKind.NONNEG, 1)
        solution = solve(build_program(registry, [], {0: 1.0}))
        assert solution.status == SolveStatus.DUAL_INFEASIBLE

    def test_unknown_backend_should_raise(self):
        with pytest.raises(InvalidInputError):
            solve(_soc_program(), SolverOptions(backend="mosek"))

    def test_presolve_should_drop_dependent_rows(self):
        registry = VariableRegistry()
        registry.declare("x", ConeKind.NONNEG, 2)
        frag = Fragment("dup")
        frag.add_equality({0: 1.0, 1: 1.0}, 1.0, "a")
        frag.add_equality({0: 2.0, 1: 2.0}, 2.0, "b")
        pre = presolve(build_program(registry, [frag], {0: 1.0}))
        assert pre.status is None
        assert pre.A.shape[0] == 1


@pytest.mark.conic
class TestStandardForm:
    """Test text export and import."""

    def test_should_round_trip_to_structural_equality(self, tmp_path):
        program = _correlation_program()
        path = tmp_path / "program.txt"
        export_standard_form(program, path)
        assert import_standard_form(path) == program

    def test_should_write_to_streams(self):
        program = _soc_program()
        buffer = io.StringIO()
        text = export_standard_form(program, buffer)
        assert buffer.getvalue() == text
        assert parse_standard_form(text).structurally_equal(program)

    def test_should_reject_malformed_text(self):
        with pytest.raises(ProgramError):
            parse_standard_form("OBJ 0\n")


def _least_squares_program(design, target):
    """min ||target - design c||^2 through one rotated cone, c free."""
    m, k = design.shape
    registry = VariableRegistry()
    coefficients = registry.declare("c", ConeKind.FREE, k)
    cone = registry.declare("loss/cone", ConeKind.RSOC, 2 + m)
    frag = Fragment("loss")
    frag.add_equality({cone.offset + 1: 1.0}, 0.5, "half")
    for j in range(m):
        row = {coefficients.offset + i: float(design[j, i]) for i in range(k)}
        row[cone.offset + 2 + j] = 1.0
        frag.add_equality(row, float(target[j]), f"pt{j}")
    return build_program(registry, [frag], {cone.offset: 1.0}), coefficients


def _graded_design(rng, m=40, k=10, smallest=1e-9):
    """Design with singular values spread log-uniformly from 1 down to ``smallest``."""
    U, _ = np.linalg.qr(rng.normal(size=(m, k)))
    V, _ = np.linalg.qr(rng.normal(size=(k, k)))
    return U @ np.diag(np.logspace(0.0, np.log10(smallest), k)) @ V.T


@pytest.mark.conic
class TestFreeElimination:
    """Test removal of free variables before the interior-point solve."""

    def test_cone_only_program_should_need_no_elimination(self):
        program = _soc_program()
        assert eliminate_free(program, presolve(program)) is None

    def test_reduced_rows_should_be_orthonormal(self, rng):
        design = _graded_design(rng)
        program, _ = _least_squares_program(design, rng.normal(size=design.shape[0]))
        reduced = eliminate_free(program, presolve(program))
        assert reduced.free.size == design.shape[1]
        assert reduced.A.shape[0] == 1 + design.shape[0] - design.shape[1]
        assert np.allclose(reduced.A @ reduced.A.T, np.eye(reduced.A.shape[0]), atol=1e-10)
        assert reduced.offset == 0.0

    def test_ill_conditioned_least_squares_should_match_lstsq(self, rng):
        design = _graded_design(rng)
        truth = rng.normal(size=design.shape[1])
        target = design @ truth + 1e-3 * rng.normal(size=design.shape[0])
        program, coefficients = _least_squares_program(design, target)
        solution = solve(program)
        assert solution.is_optimal
        c, *_ = np.linalg.lstsq(design, target, rcond=None)
        expected = float(np.sum((target - design @ c) ** 2))
        assert solution.primal_objective == pytest.approx(expected, abs=1e-7)
        assert program.objective_value(solution.x) == pytest.approx(expected, abs=1e-7)
        fitted = solution.x[list(coefficients.indices)]
        assert np.linalg.norm(design @ (fitted - c)) < 1e-3

    def test_recovered_point_should_satisfy_every_equality(self, rng):
        design = _graded_design(rng)
        program, coefficients = _least_squares_program(design, rng.normal(size=design.shape[0]))
        solution = solve(program)
        assert np.max(np.abs(program.A @ solution.x - program.b)) < 1e-6
        # free columns carry no cost, so the duals must annihilate them
        free = list(coefficients.indices)
        assert np.max(np.abs(program.A[:, free].T @ solution.y)) < 1e-6
