"""Exact tools for sparse polynomial hypersurfaces in the positive orthant."""

__version__ = "0.1.0"
