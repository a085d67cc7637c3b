"""Dimension certification from contextuality-inequality values."""

__version__ = "0.1.0"
