"""Verification laboratory for the cosine-sine functional equation system on semigroups."""

__version__ = "0.1.0"
