"""Test package for tcs-forge."""
