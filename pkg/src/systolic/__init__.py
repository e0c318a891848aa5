"""Finite k-large and systolic simplicial complexes."""

__version__ = "0.1.0"
