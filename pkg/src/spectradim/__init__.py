"""Certified bounds for the dimension function of the Lagrange and Markov spectra."""

__version__ = "0.1.0"
