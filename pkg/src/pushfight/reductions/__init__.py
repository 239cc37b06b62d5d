"""Generators for the two hardness reductions."""
