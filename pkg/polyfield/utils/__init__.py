"""Utility helpers for polyfield."""

from .helpers import canonical_json, fingerprint, is_polyfield_error, parse_error

__all__ = ["canonical_json", "fingerprint", "is_polyfield_error", "parse_error"]
