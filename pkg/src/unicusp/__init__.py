"""Exact combinatorics of unicuspidal rational plane curves."""
__version__ = "0.1.0"
