"""Exact polynomial approximation and agnostic learning of disjunctions over
symmetric and product distributions on the Boolean cube."""

__version__ = "0.1.0"
