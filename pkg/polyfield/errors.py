"""
Exception hierarchy for polyfield.

Every error raised on purpose by the library derives from PolyfieldError and
carries a short machine-readable code plus the CLI exit status it maps to.
"""

from typing import Any, List, Optional, Sequence


class PolyfieldError(Exception):
    """Base class for polyfield errors."""

    code = "POLYFIELD_ERROR"
    exit_status = 1

    def __init__(self, message: str, code: Optional[str] = None):
        super().__init__(message)
        self.message = message
        if code is not None:
            self.code = code

    def __str__(self) -> str:
        return self.message


class DimensionMismatchError(PolyfieldError, ValueError):
    code = "DIMENSION_MISMATCH"


class DegreeError(PolyfieldError, ValueError):
    code = "INVALID_DEGREE"


class IndexOutOfRangeError(PolyfieldError, IndexError):
    code = "INDEX_OUT_OF_RANGE"


class BasisError(PolyfieldError, ValueError):
    """A polynomial has a monomial that is missing from the requested basis."""

    code = "MONOMIAL_NOT_IN_BASIS"


class EmptyGridError(PolyfieldError):
    """Grid sampling produced no admissible point."""

    code = "EMPTY_GRID"


class ProgramError(PolyfieldError, ValueError):
    """Malformed conic program (undeclared variable, conflicting cone tag)."""

    code = "INVALID_PROGRAM"


class CertificateError(PolyfieldError, ValueError):
    code = "CERTIFICATE_MISMATCH"


class InfeasibleSideInfoError(PolyfieldError):
    """The imposed side information has no common solution."""

    code = "INFEASIBLE_SIDE_INFO"
    exit_status = 2

    def __init__(self, message: str, blocks: Optional[Sequence[str]] = None):
        super().__init__(message)
        self.blocks: List[str] = list(blocks or [])


class SideInfoViolationError(PolyfieldError):
    """A concrete field violates side information beyond tolerance."""

    code = "SIDE_INFO_VIOLATED"
    exit_status = 2


class SolverFailureError(PolyfieldError):
    code = "SOLVER_FAILURE"
    exit_status = 3


class DivergenceError(PolyfieldError):
    """Integration produced a non-finite state."""

    code = "DIVERGENCE"
    exit_status = 3

    def __init__(self, message: str, last_state: Any = None, last_time: float = 0.0):
        super().__init__(message)
        self.last_state = last_state
        self.last_time = last_time


class ConfigError(PolyfieldError, ValueError):
    code = "CONFIG_ERROR"
    exit_status = 4


class ExperimentError(PolyfieldError):
    """A pipeline stage failed; the partial manifest has been persisted."""

    code = "EXPERIMENT_FAILED"

    def __init__(self, message: str, stage: str, cause: Optional[BaseException] = None):
        super().__init__(message)
        self.stage = stage
        self.cause = cause
        if isinstance(cause, PolyfieldError):
            self.exit_status = cause.exit_status


class InvalidInputError(PolyfieldError, ValueError):
    """Arguments violate an operation's preconditions."""

    code = "INVALID_INPUT"
