"""Mutually unbiased measurements, generalized-entropy uncertainty bounds and
MUM-based entanglement detection."""

__version__ = "0.1.0"
