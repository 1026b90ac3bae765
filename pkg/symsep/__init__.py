"""Separability criteria from symmetric (N,M)-POVM statistics."""

__version__ = "0.1.0"
