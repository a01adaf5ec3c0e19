"""Exact counting, search and numerical checks for non-trivial 3-wise
intersecting uniform families."""

__version__ = "0.1.0"
