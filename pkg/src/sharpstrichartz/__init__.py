"""Exact and numerical verification tools for sharp Strichartz estimates."""

__version__ = "0.1.0"
