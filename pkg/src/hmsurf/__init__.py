"""Minimal vertical graphs in the hyperbolic plane times the real line."""

__version__ = "0.1.0"
