"""Exact checks of isospectrality and arithmetic equivalence at desk scale."""

__version__ = "0.1.0"
