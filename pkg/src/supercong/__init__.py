"""Numerical verification of supercongruences for truncated binomial sums."""

__version__ = "0.1.0"
