"""Interval multipliers for discrete Fourier-Jacobi expansions."""
