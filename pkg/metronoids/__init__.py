"""Metronoids of discrete measures and the approximation quantities built on them."""

__version__ = "0.1.0"
