"""Finite-group cohomology, central extensions, and norm stability."""

__version__ = "0.1.0"

SCHEMA_VERSION = 1
