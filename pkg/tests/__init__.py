"""
Test suite for polylift
"""
