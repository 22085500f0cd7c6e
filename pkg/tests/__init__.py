"""
Tests for greenvar
"""
