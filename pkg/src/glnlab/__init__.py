"""Exact-arithmetic workbench for local GL_n computations."""

__version__ = "0.1.0"
