"""Benchmark problems, their instances and the exhaustive oracle."""
