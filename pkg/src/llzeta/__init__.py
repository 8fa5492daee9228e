"""Euler-Riemann / Lerch-Lipschitz zeta family: series, contour continuation,
residues, monodromies and Taylor continuation."""

__version__ = "0.1.0"
