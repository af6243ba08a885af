"""Exact traces and spectra of level-one Hecke operators, and the
distribution of their eigenvalue angles."""

__version__ = "0.1.0"
