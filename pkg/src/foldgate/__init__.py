"""Fold-transversal Clifford gates for CSS codes."""

__version__ = "0.1.0"
