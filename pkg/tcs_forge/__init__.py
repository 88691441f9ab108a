"""Exact arithmetic for twisted connected sum building blocks and bundle data."""

__version__ = "0.1.0"
