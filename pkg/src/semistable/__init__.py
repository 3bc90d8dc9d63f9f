"""Galois action on the l-adic cohomology of curves from semistable reduction data."""

__version__ = "0.1.0"
