"""Gate constructors and the parameterized circuit container.

Every gate is ``exp(i * s * G)`` of a truncated Hermitian generator ``G``. Two-parameter
gates are split into a magnitude ``s`` and a phase that fixes ``G``; the spectrum of each
``(kind, D, hbar, phase)`` generator is computed once and reused for every magnitude.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from pcqo.core.cache import GateCache
from pcqo.core.fock import (
    DEFAULT_HBAR,
    NORM_TOL,
    HermitianSpectrum,
    ModeState,
    TruncatedOperator,
    annihilation,
    apply_gate,
    check_cutoff,
    number,
    quadratures,
)
from pcqo.exceptions import CircuitError, GateSpecError, NumericContractError

PARAM_DECIMALS = 12

class GateKind(Enum):
    R = ("R", 1, 1, True)
    DISP = ("Disp", 1, 2, True)
    SQUEEZE = ("Squeeze", 1, 2, True)
    BS = ("BS", 2, 2, True)
    QUAD_PHASE = ("QuadPhase", 1, 1, True)
    CZ = ("CZ", 2, 1, True)
    TWO_MODE_SQUEEZE = ("TwoModeSqueeze", 2, 2, True)
    CUBIC_PHASE = ("CubicPhase", 1, 1, False)
    KERR = ("Kerr", 1, 1, False)
    CROSS_KERR = ("CrossKerr", 2, 1, False)
    X = ("X", 1, 1, True)
    PZ = ("Pz", 1, 1, True)

    def __init__(self, symbol: str, arity: int, n_params: int, gaussian: bool):
        self.symbol = symbol
        self.arity = arity
        self.n_params = n_params
        self.gaussian = gaussian

    @classmethod
    def symbols(cls) -> List[str]:
        return [kind.symbol for kind in cls]

    @classmethod
    def find(cls, symbol: str) -> "GateKind":
        for kind in cls:
            if kind.symbol.lower() == symbol.strip().lower() or kind.name.lower() == symbol.strip().lower():
                return kind
        raise GateSpecError(f"Unknown gate kind '{symbol}', expected one of {', '.join(cls.symbols())}")

    def __str__(self):
        return self.symbol


@dataclass(frozen=True)
class ParamRef:
    """One gate parameter: ``offset + scale * theta[slot]``, or the constant ``offset``."""

    slot: Optional[int] = None
    scale: float = 1.0
    offset: float = 0.0

    @classmethod
    def fixed(cls, value: float) -> "ParamRef":
        return cls(None, 0.0, float(value))

    @classmethod
    def bind(cls, slot: int, scale: float = 1.0) -> "ParamRef":
        if slot < 0:
            raise GateSpecError(f"Parameter slot must be >= 0, got {slot}")
        return cls(int(slot), float(scale), 0.0)

    def resolve(self, theta: np.ndarray) -> float:
        if self.slot is None:
            return self.offset
        return self.offset + self.scale * float(theta[self.slot])

    def shifted(self, offset: int) -> "ParamRef":
        if self.slot is None:
            return self
        return ParamRef(self.slot + offset, self.scale, self.offset)

    def describe(self) -> str:
        if self.slot is None:
            return f"{self.offset:g}"
        text = f"θ{self.slot}" if self.scale == 1.0 else f"{self.scale:g}·θ{self.slot}"
        return text if self.offset == 0.0 else f"{self.offset:g}+{text}"


@dataclass(frozen=True)
class GateSpec:
    kind: GateKind
    targets: Tuple[int, ...]
    params: Tuple[ParamRef, ...]

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        object.__setattr__(self, "params", tuple(self.params))
        if len(self.targets) != self.kind.arity:
            raise GateSpecError(
                f"{self.kind} acts on {self.kind.arity} mode(s), got targets {self.targets}"
            )
        if len(set(self.targets)) != len(self.targets):
            raise GateSpecError(f"{self.kind} has duplicate targets {self.targets}")
        if len(self.params) != self.kind.n_params:
            raise GateSpecError(
                f"{self.kind} takes {self.kind.n_params} parameter(s), got {len(self.params)}"
            )

    @classmethod
    def of(cls, kind: GateKind, targets: Sequence[int], *params: Union[int, ParamRef]) -> "GateSpec":
        """Build a spec where bare integers are slot indices."""
        refs = tuple(p if isinstance(p, ParamRef) else ParamRef.bind(p) for p in params)
        return cls(kind, tuple(targets), refs)

    @classmethod
    def template(cls, kind: GateKind, targets: Sequence[int], slot: int) -> "GateSpec":
        """Magnitude bound to ``slot``, any phase parameter fixed to zero."""
        params = [ParamRef.bind(slot)] + [ParamRef.fixed(0.0)] * (kind.n_params - 1)
        return cls(kind, tuple(targets), tuple(params))

    @property
    def slots(self) -> Tuple[int, ...]:
        return tuple(ref.slot for ref in self.params if ref.slot is not None)

    def resolve(self, theta: np.ndarray) -> Tuple[float, ...]:
        return tuple(ref.resolve(theta) for ref in self.params)

    def shifted(self, offset: int) -> "GateSpec":
        return GateSpec(self.kind, self.targets, tuple(ref.shifted(offset) for ref in self.params))

    def describe(self) -> str:
        targets = ",".join(str(t) for t in self.targets)
        params = ", ".join(ref.describe() for ref in self.params)
        return f"{self.kind.symbol}[{targets}]({params})"


@dataclass(frozen=True)
class Circuit:
    modes: int
    cutoff: int
    gates: Tuple[GateSpec, ...]
    n_params: int
    hbar: float = DEFAULT_HBAR

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        check_cutoff(self.cutoff)
        if self.modes < 1:
            raise CircuitError(f"A circuit needs at least one mode, got {self.modes}")
        referenced = set()
        for gate in self.gates:
            if any(t >= self.modes or t < 0 for t in gate.targets):
                raise CircuitError(f"{gate.describe()} targets a mode outside 0..{self.modes - 1}")
            for slot in gate.slots:
                if slot >= self.n_params:
                    raise CircuitError(f"{gate.describe()} references slot {slot} >= Q={self.n_params}")
                referenced.add(slot)
        missing = sorted(set(range(self.n_params)) - referenced)
        if missing:
            raise CircuitError(f"Parameter slots {missing} are never referenced")

    @classmethod
    def build(
        cls,
        modes: int,
        cutoff: int,
        gates: Iterable[GateSpec],
        hbar: float = DEFAULT_HBAR,
    ) -> "Circuit":
        gates = tuple(gates)
        n_params = max((slot + 1 for gate in gates for slot in gate.slots), default=0)
        return cls(modes, cutoff, gates, n_params, hbar)

    def concatenate(self, other: "Circuit") -> "Circuit":
        """Run ``self`` then ``other``; the slots of ``other`` follow those of ``self``."""
        if (self.modes, self.cutoff, self.hbar) != (other.modes, other.cutoff, other.hbar):
            raise CircuitError("Only circuits with equal modes, cutoff and hbar can be concatenated")
        gates = self.gates + tuple(gate.shifted(self.n_params) for gate in other.gates)
        return Circuit(self.modes, self.cutoff, gates, self.n_params + other.n_params, self.hbar)

    def describe(self) -> List[str]:
        return [gate.describe() for gate in self.gates]


# ---- Generators ----


def _phase_key(phase: float) -> float:
    return round(float(np.mod(phase, 2.0 * np.pi)), PARAM_DECIMALS)


def _ladder(cutoff: int) -> Tuple[np.ndarray, np.ndarray]:
    a = annihilation(cutoff).matrix
    return a, a.conj().T


def generator_matrix(kind: GateKind, cutoff: int, hbar: float, phase: float = 0.0) -> np.ndarray:
    """Hermitian ``G`` such that the gate of magnitude ``s`` is ``exp(i s G)``."""
    x, p = (op.matrix for op in quadratures(cutoff, hbar))
    n = number(cutoff, hbar).matrix
    a, adag = _ladder(cutoff)
    if kind is GateKind.R:
        return n
    if kind is GateKind.KERR:
        return n @ n
    if kind is GateKind.QUAD_PHASE:
        return x @ x / (2.0 * hbar)
    if kind is GateKind.CUBIC_PHASE:
        return x @ x @ x / (3.0 * hbar)
    if kind is GateKind.X:
        return -p / hbar
    if kind is GateKind.CZ:
        return np.kron(x, x) / hbar
    if kind is GateKind.CROSS_KERR:
        return np.kron(n, n)
    # anti-Hermitian A with U = exp(s A) = exp(i s (-i A))
    if kind is GateKind.DISP:
        anti = np.exp(1j * phase) * adag - np.exp(-1j * phase) * a
    elif kind is GateKind.SQUEEZE:
        anti = 0.5 * (np.exp(-1j * phase) * (a @ a) - np.exp(1j * phase) * (adag @ adag))
    elif kind is GateKind.BS:
        anti = np.exp(1j * phase) * np.kron(a, adag) - np.exp(-1j * phase) * np.kron(adag, a)
    elif kind is GateKind.TWO_MODE_SQUEEZE:
        anti = np.exp(1j * phase) * np.kron(adag, adag) - np.exp(-1j * phase) * np.kron(a, a)
    else:
        raise GateSpecError(f"{kind} has no single generator")
    return -1j * anti


@lru_cache(maxsize=512)
def _spectrum(kind: GateKind, cutoff: int, hbar: float, phase: float) -> HermitianSpectrum:
    return HermitianSpectrum.of(generator_matrix(kind, cutoff, hbar, phase))


def _magnitude_and_phase(kind: GateKind, params: Tuple[float, ...]) -> Tuple[float, float]:
    if kind.n_params == 1:
        return params[0], 0.0
    first, second = params
    if kind in (GateKind.DISP, GateKind.TWO_MODE_SQUEEZE):
        return float(np.hypot(first, second)), float(np.arctan2(second, first))
    return first, second


def _build_matrix(kind: GateKind, params: Tuple[float, ...], cutoff: int, hbar: float) -> np.ndarray:
    magnitude, phase = _magnitude_and_phase(kind, params)
    dim = cutoff**kind.arity
    if magnitude == 0.0:
        return np.eye(dim, dtype=complex)
    if kind is GateKind.PZ:
        # R(-pi/2) P(s) R(pi/2)
        rotation = np.exp(-0.5j * np.pi * np.arange(cutoff))
        quad = _spectrum(GateKind.QUAD_PHASE, cutoff, hbar, 0.0).exp(magnitude)
        return (rotation[:, None] * quad) * rotation.conj()[None, :]
    return _spectrum(kind, cutoff, hbar, _phase_key(phase)).exp(magnitude)


GATE_CACHE = GateCache(_build_matrix)


def make_gate(
    spec: Union[GateSpec, GateKind],
    params: Sequence[float],
    cutoff: int,
    hbar: float = DEFAULT_HBAR,
) -> TruncatedOperator:
    """Return the truncated unitary of ``spec`` for resolved ``params``."""
    kind = spec.kind if isinstance(spec, GateSpec) else spec
    cutoff = check_cutoff(cutoff)
    if len(params) != kind.n_params:
        raise GateSpecError(f"{kind} takes {kind.n_params} parameter(s), got {len(params)}")
    values = tuple(float(v) for v in params)
    if not all(np.isfinite(values)):
        raise GateSpecError(f"{kind} received non-finite parameters {values}")
    rounded = tuple(round(v, PARAM_DECIMALS) + 0.0 for v in values)
    matrix = GATE_CACHE(kind, rounded, cutoff, float(hbar))
    return TruncatedOperator(matrix, cutoff, kind.arity, hbar)


def run_circuit(circuit: Circuit, params: Sequence[float], initial: ModeState) -> ModeState:
    """Apply the gates of ``circuit`` in order."""
    theta = np.asarray(params, dtype=float).reshape(-1)
    if theta.size != circuit.n_params:
        raise CircuitError(f"Circuit expects {circuit.n_params} parameters, got {theta.size}")
    if (initial.modes, initial.cutoff) != (circuit.modes, circuit.cutoff):
        raise CircuitError(
            f"Initial state (N={initial.modes}, D={initial.cutoff}) does not match "
            f"circuit (N={circuit.modes}, D={circuit.cutoff})"
        )
    state = initial
    for gate in circuit.gates:
        unitary = make_gate(gate, gate.resolve(theta), circuit.cutoff, circuit.hbar)
        state = apply_gate(state, unitary, gate.targets)
    norm = state.norm()
    if abs(norm - 1.0) > NORM_TOL * max(1, len(circuit.gates)):
        raise NumericContractError(f"State norm drifted to {norm!r} after {len(circuit.gates)} gates")
    return state


def prepare_state(gates: Iterable[GateSpec], initial: ModeState, hbar: float = DEFAULT_HBAR) -> ModeState:
    """Apply gates whose parameters are all fixed constants."""
    state = initial
    for gate in gates:
        if gate.slots:
            raise GateSpecError(f"{gate.describe()} is not fully fixed")
        unitary = make_gate(gate, gate.resolve(np.zeros(0)), initial.cutoff, hbar)
        state = apply_gate(state, unitary, gate.targets)
    return state


__all__ = [
    "GATE_CACHE",
    "GateKind",
    "ParamRef",
    "GateSpec",
    "Circuit",
    "generator_matrix",
    "make_gate",
    "run_circuit",
    "prepare_state",
]
