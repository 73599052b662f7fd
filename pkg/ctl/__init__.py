"""Chromatic threshold classification, constructions and verification."""

__version__ = "0.1.0"
