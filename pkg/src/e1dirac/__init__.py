"""Coordinate calculus of Dirac structures on the bundle (TM x R) + (T*M x R)."""

__version__ = "0.1.0"
