"""Partial-data Calderón toolkit for periodic cylindrical waveguides."""

__version__ = "0.1.0"
