"""Exact combinatorics of marked graphs, Stallings cores, and the spine of
outer space: distortion witnesses and Lipschitz retractions, all desk-scale
and integer-exact."""

__version__ = "0.1.0"
