"""Exact-arithmetic workbench for cocycle conditions, switchback cohomology,
deformed R-matrices, and closed-braid invariants."""

__version__ = "0.1.0"
