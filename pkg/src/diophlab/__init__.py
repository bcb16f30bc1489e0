"""Certified computations around Diophantine approximation, continued fractions and related counts."""

__version__ = "0.1.0"
