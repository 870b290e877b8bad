"""Exact-arithmetic laboratory for the extended Hietarinta-Viallet map."""

__version__ = "0.1.0"
