"""Symbolic boson polynomials and the counterdiabatic pool."""
