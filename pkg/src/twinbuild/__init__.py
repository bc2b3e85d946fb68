"""Finite buildings, codistances, and twin-building construction."""

__version__ = "0.1.0"
