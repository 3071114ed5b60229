"""
Helper utility functions for polyfield.

Error normalisation for the CLI and stable fingerprints of JSON-compatible
descriptions.
"""

import hashlib
import json
from typing import Any, Dict

from ..errors import PolyfieldError


def canonical_json(data: Any) -> str:
    """Compact JSON with sorted keys; identical inputs give identical text."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"), allow_nan=True)


def fingerprint(data: Any) -> str:
    """
    sha256 of the canonical JSON of ``data``.

    Examples:
        >>> fingerprint({"b": 1, "a": 2}) == fingerprint({"a": 2, "b": 1})
        True
    """
    return hashlib.sha256(canonical_json(data).encode("utf-8")).hexdigest()


def parse_error(error: Any) -> Dict[str, Any]:
    """
    Parses and standardizes error objects.

    Any exception becomes ``{message, code, exit_status}``; polyfield errors
    keep their code and exit status, everything else is reported as an
    internal error with exit status 1.

    Args:
        error: Any error object to parse and standardize

    Returns:
        Standardized error dictionary

    Examples:
        >>> from polyfield.errors import ConfigError
        >>> parse_error(ConfigError("bad degree"))["exit_status"]
        4
        >>> parse_error(ValueError("Test error"))["code"]
        'INTERNAL'
    """
    if is_polyfield_error(error):
        return {
            "message": error.message or "Unknown Error",
            "code": error.code,
            "exit_status": error.exit_status,
        }
    return {
        "message": str(error) or "Unknown Error",
        "code": "INTERNAL",
        "exit_status": 1,
    }


def is_polyfield_error(err: Any) -> bool:
    """
    Type guard to check if an error is a polyfield error.

    Examples:
        >>> from polyfield.errors import SolverFailureError
        >>> is_polyfield_error(SolverFailureError("stalled"))
        True
        >>> is_polyfield_error(RuntimeError("boom"))
        False
    """
    return isinstance(err, PolyfieldError)
