"""Doubly balanced connected graph partitioning."""

__version__ = "0.1.0"
