"""
Tests for the shared enums and configuration dataclasses.
"""

import pytest

from polyfield import LossKind, PolyfieldConfig, SolverOptions, SolveStatus
from polyfield.types import ConeKind, Metric, SideInfoTag


@pytest.mark.unit
class TestEnums:
    """Test string-valued enums."""

    def test_should_round_trip_through_values(self):
        """Test that every enum member is recovered from its value."""
        for enum in (ConeKind, SolveStatus, LossKind, SideInfoTag, Metric):
            for member in enum:
                assert enum(member.value) is member

    def test_should_compare_equal_to_plain_strings(self):
        assert SideInfoTag.INV == "inv"
        assert SolveStatus.PRIMAL_INFEASIBLE == "primal-infeasible"

    def test_should_reject_unknown_values(self):
        with pytest.raises(ValueError):
            LossKind("l3")


@pytest.mark.unit
class TestPolyfieldConfig:
    """Test PolyfieldConfig dataclass."""

    def test_should_have_documented_defaults(self):
        config = PolyfieldConfig()
        assert config.solver_backend == "cvxopt"
        assert config.residual_delta == 1e-5
        assert config.integrator_step == 1e-3

    def test_should_serialize_with_dataclasses_json(self):
        """Test to_dict/from_dict provided by dataclass_json."""
        config = PolyfieldConfig(gap_tol=1e-10, verbose=True)
        assert PolyfieldConfig.from_dict(config.to_dict()) == config


@pytest.mark.unit
class TestSolverOptions:
    """Test SolverOptions dataclass."""

    def test_from_config_should_copy_tolerances(self):
        opts = SolverOptions.from_config(PolyfieldConfig(gap_tol=1e-9, max_iters=12, verbose=True))
        assert opts.gap_tol == 1e-9
        assert opts.max_iters == 12
        assert opts.show_progress is True

    def test_to_dict_should_omit_progress_flag(self):
        assert SolverOptions().to_dict() == {
            "gap_tol": 1e-8,
            "feas_tol": 1e-8,
            "max_iters": 200,
            "backend": "cvxopt",
        }
