"""Certified numerics for symbolic and complex dynamics."""

__version__ = "0.1.0"
