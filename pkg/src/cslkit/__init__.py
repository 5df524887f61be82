"""Coincidence site lattices and similar sublattices: counting and constructions."""

__version__ = "0.1.0"
