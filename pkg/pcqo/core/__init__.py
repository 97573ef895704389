"""Truncated Fock-space states, operators and gates."""
