"""Exception hierarchy shared by every ``pcqo`` module."""

from __future__ import annotations

from typing import Iterable, Sequence, Tuple


class PcqoError(Exception):
    """Base class of all errors raised by the package."""


class InvalidCutoffError(PcqoError):
    def __init__(self, cutoff: int, minimum: int = 2):
        self.cutoff = cutoff
        super().__init__(f"Fock cutoff must be >= {minimum}, got {cutoff}")


class ContractViolationError(PcqoError):
    """An input broke a documented precondition (shape, hermiticity, arity)."""


class HbarMismatchError(ContractViolationError):
    def __init__(self, left: float, right: float):
        super().__init__(f"Operators built with different hbar: {left} != {right}")


class NumericContractError(PcqoError):
    """A computed quantity left the numerically valid range (NaN, lost norm)."""


class GateSpecError(PcqoError):
    """A GateSpec or its resolved parameters are invalid."""


class CircuitError(PcqoError):
    """A circuit is malformed or does not match its parameter vector."""


class DegeneratePoolError(PcqoError):
    def __init__(self, mixer: str, problem: str):
        message = "Error: [H_p, H_m] == 0, the counterdiabatic pool is empty\n"
        message += "Mixer Hamiltonian:\n"
        message += mixer + "\n"
        message += "Problem Hamiltonian:\n"
        message += problem
        super().__init__(message)


class NoRealizableAnsatzError(PcqoError):
    def __init__(self, whitelist: Iterable[str], labels: Iterable[str]):
        message = "Error: no pool operator is realizable with the allowed gates\n"
        message += f"Whitelist: {', '.join(whitelist)}\n"
        message += f"Pool: {', '.join(labels) or '<empty>'}"
        super().__init__(message)


class ProblemDefinitionError(PcqoError):
    """A problem instance is inconsistent (lengths, signs, adjacency)."""


class NotDecomposableError(PcqoError):
    """The cost function is not quadratic in the photon numbers."""


class SearchSpaceTooLargeError(PcqoError):
    def __init__(self, size: int, limit: int):
        self.size = size
        super().__init__(f"Exhaustive search over {size} points exceeds the limit of {limit}")


class OptimizationDivergedError(PcqoError):
    """Every restart of an optimization failed."""


class ConfigError(PcqoError):
    def __init__(self, path: str, problems: Sequence[Tuple[int | None, str]]):
        self.path = path
        self.problems = list(problems)
        message = f"Error: invalid configuration {path}\n"
        for line, text in self.problems:
            where = f"line {line}" if line is not None else "<missing>"
            message += f"  {where}: {text}\n"
        super().__init__(message.rstrip("\n"))


__all__ = [
    "PcqoError",
    "InvalidCutoffError",
    "ContractViolationError",
    "HbarMismatchError",
    "NumericContractError",
    "GateSpecError",
    "CircuitError",
    "DegeneratePoolError",
    "NoRealizableAnsatzError",
    "ProblemDefinitionError",
    "NotDecomposableError",
    "SearchSpaceTooLargeError",
    "OptimizationDivergedError",
    "ConfigError",
]
