"""Exact tools for intrinsic Diophantine approximation on missing-digit sets."""

__version__ = "0.1.0"
