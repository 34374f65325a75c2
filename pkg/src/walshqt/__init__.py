"""Exact Walsh phase-space analysis of the quartile operator."""

__version__ = "0.1.0"
