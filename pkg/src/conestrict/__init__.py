"""Associators of cartesian products built from explicit product cones."""

__version__ = "0.1.0"
