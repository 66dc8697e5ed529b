"""Numerical verification of generalized Killing spinors on model manifolds."""

__version__ = "0.1.0"
