"""Bandit-guided tree search for classical planning."""

__version__ = "0.1.0"
