"""Arithmetic R-divisors and minimax machinery on quadratic arithmetic curves."""

__version__ = "0.1.0"
