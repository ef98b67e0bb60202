"""Shift-invariant (a trous) iterated filter banks."""

__version__ = "0.1.0"
