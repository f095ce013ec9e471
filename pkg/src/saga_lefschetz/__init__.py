"""Exact computations for complete intersection Artinian Gorenstein algebras of quadrics."""

__version__ = "0.1.0"
