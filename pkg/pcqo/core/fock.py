"""Truncated Fock-space linear algebra.

Operators are dense matrices over the basis ``|0>, ..., |D-1>`` of one mode (or the
``D**2`` product basis of two modes, first mode slowest). States are amplitude tensors
of shape ``(D,) * N`` with mode 0 as the slowest-varying index. Gates are applied by
contracting only the target axes, so an ``N``-mode operator is never materialized.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Sequence, Tuple, Union

import numpy as np
from scipy import linalg

from pcqo.exceptions import (
    ContractViolationError,
    HbarMismatchError,
    InvalidCutoffError,
    NumericContractError,
)

DEFAULT_HBAR = 2.0
HERMITIAN_TOL = 1e-10
NORM_TOL = 1e-9
IMAG_TOL = 1e-9


def check_cutoff(cutoff: int) -> int:
    if int(cutoff) != cutoff or cutoff < 2:
        raise InvalidCutoffError(cutoff)
    return int(cutoff)


@dataclass(frozen=True, eq=False)
class TruncatedOperator:
    """Dense operator on one or two truncated modes."""

    matrix: np.ndarray
    cutoff: int
    arity: int = 1
    hbar: float = DEFAULT_HBAR

    def __post_init__(self):
        check_cutoff(self.cutoff)
        if self.arity not in (1, 2):
            raise ContractViolationError(f"Operator arity must be 1 or 2, got {self.arity}")
        if self.hbar <= 0:
            raise ContractViolationError(f"hbar must be positive, got {self.hbar}")
        matrix = np.asarray(self.matrix, dtype=complex)
        dim = self.cutoff**self.arity
        if matrix.shape != (dim, dim):
            raise ContractViolationError(
                f"Operator matrix of shape {matrix.shape} does not match dim {dim}"
            )
        object.__setattr__(self, "matrix", matrix)

    @property
    def dim(self) -> int:
        return self.cutoff**self.arity

    # ---- Algebra ----

    def _check_compatible(self, other: "TruncatedOperator"):
        if self.hbar != other.hbar:
            raise HbarMismatchError(self.hbar, other.hbar)
        if (self.cutoff, self.arity) != (other.cutoff, other.arity):
            raise ContractViolationError(
                f"Operator shapes differ: D={self.cutoff}/{self.arity} vs D={other.cutoff}/{other.arity}"
            )

    def _like(self, matrix: np.ndarray) -> "TruncatedOperator":
        return TruncatedOperator(matrix, self.cutoff, self.arity, self.hbar)

    def dag(self) -> "TruncatedOperator":
        return self._like(self.matrix.conj().T)

    def __matmul__(self, other: "TruncatedOperator") -> "TruncatedOperator":
        self._check_compatible(other)
        return self._like(self.matrix @ other.matrix)

    def __add__(self, other: "TruncatedOperator") -> "TruncatedOperator":
        self._check_compatible(other)
        return self._like(self.matrix + other.matrix)

    def __sub__(self, other: "TruncatedOperator") -> "TruncatedOperator":
        self._check_compatible(other)
        return self._like(self.matrix - other.matrix)

    def __mul__(self, scalar: complex) -> "TruncatedOperator":
        return self._like(self.matrix * scalar)

    __rmul__ = __mul__

    def kron(self, other: "TruncatedOperator") -> "TruncatedOperator":
        """Two-mode product with ``self`` on the slower index."""
        if self.arity != 1 or other.arity != 1:
            raise ContractViolationError("kron expects two single-mode operators")
        if self.hbar != other.hbar:
            raise HbarMismatchError(self.hbar, other.hbar)
        return TruncatedOperator(np.kron(self.matrix, other.matrix), self.cutoff, 2, self.hbar)

    # ---- Checks ----

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return bool(np.max(np.abs(self.matrix - self.matrix.conj().T), initial=0.0) <= tol)

    def unitarity_error(self) -> float:
        product = self.matrix.conj().T @ self.matrix
        return float(np.max(np.abs(product - np.eye(self.dim))))

    def is_unitary(self, tol: float = 1e-10) -> bool:
        return self.unitarity_error() <= tol


# ---- Single-mode building blocks ----


@lru_cache(maxsize=64)
def _annihilation_matrix(cutoff: int) -> np.ndarray:
    matrix = np.diag(np.sqrt(np.arange(1, cutoff, dtype=float)), k=1).astype(complex)
    matrix.setflags(write=False)
    return matrix


def annihilation(cutoff: int, hbar: float = DEFAULT_HBAR) -> TruncatedOperator:
    """Ladder operator with ``<n-1|a|n> = sqrt(n)``."""
    cutoff = check_cutoff(cutoff)
    return TruncatedOperator(_annihilation_matrix(cutoff).copy(), cutoff, 1, hbar)


def creation(cutoff: int, hbar: float = DEFAULT_HBAR) -> TruncatedOperator:
    return annihilation(cutoff, hbar).dag()


def number(cutoff: int, hbar: float = DEFAULT_HBAR) -> TruncatedOperator:
    cutoff = check_cutoff(cutoff)
    return TruncatedOperator(np.diag(np.arange(cutoff, dtype=float)), cutoff, 1, hbar)


def identity(cutoff: int, arity: int = 1, hbar: float = DEFAULT_HBAR) -> TruncatedOperator:
    cutoff = check_cutoff(cutoff)
    return TruncatedOperator(np.eye(cutoff**arity), cutoff, arity, hbar)


def quadratures(cutoff: int, hbar: float = DEFAULT_HBAR) -> Tuple[TruncatedOperator, TruncatedOperator]:
    """Return ``(x, p)`` with ``x = sqrt(hbar/2)(a + a+)`` and ``p = i sqrt(hbar/2)(a+ - a)``."""
    a = annihilation(cutoff, hbar)
    adag = a.dag()
    scale = np.sqrt(hbar / 2.0)
    x = (a + adag) * scale
    p = (adag - a) * (1j * scale)
    return x, p


# ---- Exponentials ----


@dataclass(frozen=True, eq=False)
class HermitianSpectrum:
    """Eigendecomposition ``G = V diag(w) V+`` reused for every ``exp(i s G)``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @classmethod
    def of(cls, matrix: np.ndarray, tol: float = HERMITIAN_TOL) -> "HermitianSpectrum":
        matrix = np.asarray(matrix, dtype=complex)
        residue = np.max(np.abs(matrix - matrix.conj().T), initial=0.0)
        if residue > tol:
            raise ContractViolationError(f"Generator is not Hermitian (residue {residue:.3e})")
        eigenvalues, eigenvectors = linalg.eigh((matrix + matrix.conj().T) / 2.0)
        return cls(eigenvalues, eigenvectors)

    def exp(self, s: float) -> np.ndarray:
        phases = np.exp(1j * s * self.eigenvalues)
        return (self.eigenvectors * phases) @ self.eigenvectors.conj().T


def hermitian_exp(generator: TruncatedOperator, s: float) -> TruncatedOperator:
    """Return ``exp(i s G)`` for a Hermitian truncated ``G``."""
    if not np.isfinite(s):
        raise NumericContractError(f"Exponent scale must be finite, got {s}")
    spectrum = HermitianSpectrum.of(generator.matrix)
    return TruncatedOperator(spectrum.exp(s), generator.cutoff, generator.arity, generator.hbar)


# ---- States ----


@dataclass(frozen=True, eq=False)
class ModeState:
    """Pure ``N``-mode state at cutoff ``D``."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if amplitudes.ndim < 1 or len(set(amplitudes.shape)) != 1:
            raise ContractViolationError(f"Amplitude tensor must be (D,)*N, got {amplitudes.shape}")
        check_cutoff(amplitudes.shape[0])
        object.__setattr__(self, "amplitudes", amplitudes)

    @property
    def modes(self) -> int:
        return self.amplitudes.ndim

    @property
    def cutoff(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def marginal(self, mode: int) -> np.ndarray:
        _check_mode(self, mode)
        axes = tuple(axis for axis in range(self.modes) if axis != mode)
        return np.sum(self.probabilities(), axis=axes)

    def overlap(self, other: "ModeState") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))


def vacuum(modes: int, cutoff: int) -> ModeState:
    return fock_state((0,) * modes, cutoff)


def fock_state(pattern: Sequence[int], cutoff: int) -> ModeState:
    cutoff = check_cutoff(cutoff)
    if len(pattern) < 1:
        raise ContractViolationError("A state needs at least one mode")
    if any(n < 0 or n >= cutoff for n in pattern):
        raise ContractViolationError(f"Fock pattern {tuple(pattern)} outside cutoff {cutoff}")
    amplitudes = np.zeros((cutoff,) * len(pattern), dtype=complex)
    amplitudes[tuple(pattern)] = 1.0
    return ModeState(amplitudes)


def _check_mode(state: ModeState, mode: int):
    if not 0 <= mode < state.modes:
        raise ContractViolationError(f"Mode index {mode} out of range for {state.modes} modes")


def _check_targets(state: ModeState, targets: Sequence[int]) -> Tuple[int, ...]:
    targets = tuple(int(t) for t in targets)
    if len(targets) not in (1, 2):
        raise ContractViolationError(f"Gates act on 1 or 2 modes, got targets {targets}")
    if len(set(targets)) != len(targets):
        raise ContractViolationError(f"Duplicate gate targets {targets}")
    for target in targets:
        _check_mode(state, target)
    return targets


def contract(amplitudes: np.ndarray, matrix: np.ndarray, targets: Sequence[int]) -> np.ndarray:
    """Contract a ``D**k`` matrix against the ``k`` target axes of an amplitude tensor."""
    k = len(targets)
    cutoff = amplitudes.shape[0]
    tensor = matrix.reshape((cutoff,) * (2 * k))
    out = np.tensordot(tensor, amplitudes, axes=(list(range(k, 2 * k)), list(targets)))
    return np.moveaxis(out, list(range(k)), list(targets))


def apply_gate(
    state: ModeState,
    gate: Union[TruncatedOperator, np.ndarray],
    targets: Sequence[int],
) -> ModeState:
    """Apply a one- or two-mode unitary to ``targets``; the first target is the slower index."""
    targets = _check_targets(state, targets)
    if isinstance(gate, TruncatedOperator):
        if gate.arity != len(targets):
            raise ContractViolationError(
                f"Gate arity {gate.arity} does not match targets {targets}"
            )
        if gate.cutoff != state.cutoff:
            raise ContractViolationError(
                f"Gate cutoff {gate.cutoff} does not match state cutoff {state.cutoff}"
            )
        matrix = gate.matrix
    else:
        matrix = np.asarray(gate, dtype=complex)
        dim = state.cutoff ** len(targets)
        if matrix.shape != (dim, dim):
            raise ContractViolationError(f"Gate of shape {matrix.shape} does not match dim {dim}")
    return ModeState(contract(state.amplitudes, matrix, targets))


# ---- Expectations ----


def reduced_density_matrix(state: ModeState, mode: int) -> np.ndarray:
    _check_mode(state, mode)
    moved = np.moveaxis(state.amplitudes, mode, 0).reshape(state.cutoff, -1)
    return moved @ moved.conj().T


def expect(state: ModeState, operator: TruncatedOperator, mode: int) -> float:
    """Return ``<psi|O_mode|psi>`` for a single-mode Hermitian ``O``."""
    if operator.arity != 1:
        raise ContractViolationError("expect takes a single-mode operator")
    if operator.cutoff != state.cutoff:
        raise ContractViolationError(
            f"Operator cutoff {operator.cutoff} does not match state cutoff {state.cutoff}"
        )
    if not operator.is_hermitian():
        raise ContractViolationError("expect requires a Hermitian operator")
    rho = reduced_density_matrix(state, mode)
    value = complex(np.sum(rho.T * operator.matrix))
    if abs(value.imag) >= IMAG_TOL:
        raise NumericContractError(f"Expectation has imaginary residue {value.imag:.3e}")
    return value.real


def mean_photon_numbers(state: ModeState) -> np.ndarray:
    levels = np.arange(state.cutoff)
    return np.array([float(levels @ state.marginal(mode)) for mode in range(state.modes)])


def mean_quadratures(state: ModeState, hbar: float = DEFAULT_HBAR) -> np.ndarray:
    x, _ = quadratures(state.cutoff, hbar)
    return np.array([expect(state, x, mode) for mode in range(state.modes)])


def fock_probabilities(state: ModeState, threshold: float = 0.0) -> Dict[Tuple[int, ...], float]:
    """Fock patterns with probability above ``threshold``, most likely first."""
    if threshold < 0:
        raise ContractViolationError(f"threshold must be >= 0, got {threshold}")
    probs = state.probabilities()
    flat = probs.reshape(-1)
    selected = np.flatnonzero(flat > threshold) if threshold > 0 else np.arange(flat.size)
    # stable sort keeps lexicographic order among ties
    order = selected[np.argsort(-flat[selected], kind="stable")]
    return {
        tuple(int(i) for i in np.unravel_index(index, probs.shape)): float(flat[index])
        for index in order
    }


def edge_population(state: ModeState) -> float:
    """Probability that at least one mode sits on the top retained level ``D-1``."""
    inner = state.probabilities()[(slice(0, state.cutoff - 1),) * state.modes]
    return float(max(0.0, 1.0 - np.sum(inner)))


def quadrature_covariance(state: ModeState, hbar: float = DEFAULT_HBAR) -> np.ndarray:
    """Symmetrized covariance of ``(x_0, p_0, x_1, p_1, ...)``."""
    x, p = quadratures(state.cutoff, hbar)
    applied = []
    for mode in range(state.modes):
        for operator in (x, p):
            applied.append(contract(state.amplitudes, operator.matrix, (mode,)).reshape(-1))
    psi = state.amplitudes.reshape(-1)
    means = np.array([np.vdot(psi, vector).real for vector in applied])
    size = len(applied)
    cov = np.empty((size, size))
    for i in range(size):
        for j in range(i, size):
            cov[i, j] = cov[j, i] = np.vdot(applied[i], applied[j]).real - means[i] * means[j]
    return cov


def symplectic_eigenvalues(cov: np.ndarray) -> np.ndarray:
    modes = cov.shape[0] // 2
    omega = np.kron(np.eye(modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    values = np.sort(np.abs(np.linalg.eigvals(1j * omega @ cov)))
    return values[::2]


__all__ = [
    "DEFAULT_HBAR",
    "TruncatedOperator",
    "HermitianSpectrum",
    "ModeState",
    "check_cutoff",
    "annihilation",
    "creation",
    "number",
    "identity",
    "quadratures",
    "hermitian_exp",
    "vacuum",
    "fock_state",
    "contract",
    "apply_gate",
    "reduced_density_matrix",
    "expect",
    "mean_photon_numbers",
    "mean_quadratures",
    "fock_probabilities",
    "edge_population",
    "quadrature_covariance",
    "symplectic_eigenvalues",
]
