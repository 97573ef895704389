"""Variational engine: ansätze, optimizers and multi-restart runs."""
