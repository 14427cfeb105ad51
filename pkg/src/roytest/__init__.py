"""Exact and asymptotic laws of Roy's largest root for rank-one non-central
F-matrices, with ROC analysis and a Monte Carlo oracle."""

__version__ = "0.1.0"
