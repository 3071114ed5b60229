"""
Tests for the utils module of polyfield.
"""
