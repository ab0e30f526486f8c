"""Quadratic embedding constants of graphs."""

__version__ = "0.1.0"
