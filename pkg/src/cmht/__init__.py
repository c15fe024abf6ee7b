"""Exact-arithmetic toolkit for CM ideal-lattice data."""

__version__ = "0.1.0"
