"""
Tests for the helper utilities.
"""

import math

import pytest

from polyfield.errors import (
    ConfigError,
    ExperimentError,
    InfeasibleSideInfoError,
    PolyfieldError,
    SolverFailureError,
)
from polyfield.utils import canonical_json, fingerprint, is_polyfield_error, parse_error


@pytest.mark.utils
class TestFingerprint:
    """Test canonical JSON and hashing."""

    def test_key_order_should_not_matter(self):
        assert fingerprint({"b": 1, "a": [1, 2]}) == fingerprint({"a": [1, 2], "b": 1})

    def test_values_should_matter(self):
        assert fingerprint({"a": 1}) != fingerprint({"a": 2})

    def test_canonical_json_should_be_compact(self):
        assert canonical_json({"b": 1, "a": None}) == '{"a":null,"b":1}'

    def test_non_finite_numbers_should_be_allowed(self):
        assert "NaN" in canonical_json([math.nan])
        assert len(fingerprint({"x": math.inf})) == 64


@pytest.mark.utils
class TestParseError:
    """Test error normalisation."""

    @pytest.mark.parametrize(
        "error,code,status",
        [
            (ConfigError("bad"), "CONFIG_ERROR", 4),
            (InfeasibleSideInfoError("clash", ["interp1"]), "INFEASIBLE_SIDE_INFO", 2),
            (SolverFailureError("stalled"), "SOLVER_FAILURE", 3),
        ],
    )
    def test_should_keep_code_and_exit_status(self, error, code, status):
        parsed = parse_error(error)
        assert parsed["code"] == code
        assert parsed["exit_status"] == status
        assert parsed["message"] == error.message

    def test_foreign_errors_should_be_internal(self):
        assert parse_error(RuntimeError("boom")) == {
            "message": "boom",
            "code": "INTERNAL",
            "exit_status": 1,
        }

    def test_empty_message_should_get_placeholder(self):
        assert parse_error(RuntimeError())["message"] == "Unknown Error"

    def test_experiment_error_should_inherit_cause_status(self):
        error = ExperimentError("fit failed", "fit:none@2", InfeasibleSideInfoError("clash"))
        assert parse_error(error)["exit_status"] == 2

    def test_type_guard(self):
        assert is_polyfield_error(PolyfieldError("x"))
        assert not is_polyfield_error(ValueError("x"))
