"""Desk-scale experiments in computability, symbolic dynamics and quantum parallelism."""

__version__ = "0.1.0"
