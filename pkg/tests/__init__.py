"""
Test suite for polyfield.
"""
