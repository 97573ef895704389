"""PCQO ansätze, scenarios and the mean-value cost."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from pcqo.algebra.pool import Connectivity, nested_pool, select_ansatz
from pcqo.core.fock import (
    DEFAULT_HBAR,
    ModeState,
    edge_population,
    fock_probabilities,
    mean_photon_numbers,
    mean_quadratures,
    vacuum,
)
from pcqo.core.gates import Circuit, GateKind, GateSpec, ParamRef, prepare_state, run_circuit
from pcqo.engine.models import FinalDiagnostics
from pcqo.exceptions import ContractViolationError
from pcqo.problems.encodings import Encoding, ProblemSpec

PHASE_WHITELIST = (GateKind.X, GateKind.TWO_MODE_SQUEEZE, GateKind.CUBIC_PHASE)
FOCK_WHITELIST = (GateKind.X, GateKind.CZ)
EXPERIMENT_WHITELIST = (GateKind.R, GateKind.BS)

DISTRIBUTION_THRESHOLD = 1e-3
EDGE_THRESHOLD = 0.05


def repeat_layers(templates: Sequence[GateSpec], layers: int) -> List[GateSpec]:
    """Stack ``layers`` copies of a one-layer template, each with fresh slots."""
    if layers < 1:
        raise ContractViolationError(f"An ansatz needs at least one layer, got {layers}")
    per_layer = max((slot + 1 for gate in templates for slot in gate.slots), default=0)
    return [gate.shifted(layer * per_layer) for layer in range(layers) for gate in templates]


def _layer(modes: int, single: Sequence[GateKind], double: GateKind, trailing: Sequence[GateKind]) -> List[GateSpec]:
    gates: List[GateSpec] = []
    for kind in single:
        start = len(gates)
        gates.extend(GateSpec.template(kind, (m,), start + m) for m in range(modes))
    start = len(gates)
    gates.extend(GateSpec.template(double, (i, i + 1), start + i) for i in range(modes - 1))
    for kind in trailing:
        start = len(gates)
        gates.extend(GateSpec.template(kind, (m,), start + m) for m in range(modes))
    return gates


def pcqo_phase_ansatz(modes: int, layers: int = 1, cutoff: int = 10, hbar: float = DEFAULT_HBAR) -> Circuit:
    """X on every mode, real two-mode squeezing on neighbours, cubic phase on every mode."""
    if modes < 2:
        raise ContractViolationError(f"The phase-space ansatz needs at least 2 modes, got {modes}")
    layer = _layer(modes, [GateKind.X], GateKind.TWO_MODE_SQUEEZE, [GateKind.CUBIC_PHASE])
    return Circuit.build(modes, cutoff, repeat_layers(layer, layers), hbar)


def pcqo_fock_ansatz(modes: int, layers: int = 1, cutoff: int = 10, hbar: float = DEFAULT_HBAR) -> Circuit:
    """X on every mode, CZ on neighbours."""
    if modes < 2:
        raise ContractViolationError(f"The Fock-space ansatz needs at least 2 modes, got {modes}")
    layer = _layer(modes, [GateKind.X], GateKind.CZ, [])
    return Circuit.build(modes, cutoff, repeat_layers(layer, layers), hbar)


def pool_ansatz(
    problem: ProblemSpec,
    whitelist: Iterable[Union[GateKind, str]],
    connectivity: Union[Connectivity, str] = Connectivity.NEAREST_NEIGHBOR,
    layers: int = 1,
    cutoff: int = 10,
    order: int = 2,
    single_mode_squeeze: bool = False,
    x0: Optional[float] = None,
    p0: Optional[float] = None,
) -> Circuit:
    """Ansatz chosen from the counterdiabatic pool of ``problem``."""
    pool = nested_pool(problem.mixer(x0, p0), problem.hamiltonian, order)
    templates = select_ansatz(pool, whitelist, connectivity, problem.n_vars, single_mode_squeeze)
    return Circuit.build(problem.n_vars, cutoff, repeat_layers(templates, layers), problem.hbar)


EXPERIMENT_MODES = 4


def experiment_ansatz(cutoff: int = 3, full_chip: bool = False, hbar: float = DEFAULT_HBAR) -> Circuit:
    """Rotations on four modes then beamsplitters on neighbours; Q = 7.

    With ``full_chip`` the same seven parameters drive a mirrored copy on modes 4..7.
    """
    layer = _layer(EXPERIMENT_MODES, [GateKind.R], GateKind.BS, [])
    if not full_chip:
        return Circuit.build(EXPERIMENT_MODES, cutoff, layer, hbar)
    mirrored = []
    for gate in layer:
        mirrored.append(gate)
        mirrored.append(GateSpec(gate.kind, tuple(t + EXPERIMENT_MODES for t in gate.targets), gate.params))
    return Circuit.build(2 * EXPERIMENT_MODES, cutoff, mirrored, hbar)


def experiment_initial_state(
    cutoff: int = 3,
    squeeze_r: float = 1.0,
    full_chip: bool = False,
    hbar: float = DEFAULT_HBAR,
) -> ModeState:
    """Squeezed inputs: two-mode pairs (0,4),(2,6) on the chip, single-mode on 0 and 2 otherwise."""
    fixed = (ParamRef.fixed(squeeze_r), ParamRef.fixed(0.0))
    if full_chip:
        gates = [GateSpec(GateKind.TWO_MODE_SQUEEZE, pair, fixed) for pair in ((0, 4), (2, 6))]
        return prepare_state(gates, vacuum(2 * EXPERIMENT_MODES, cutoff), hbar)
    gates = [GateSpec(GateKind.SQUEEZE, (mode,), fixed) for mode in (0, 2)]
    return prepare_state(gates, vacuum(EXPERIMENT_MODES, cutoff), hbar)


# ---- Cost ----


def readout_means(state: ModeState, encoding: Encoding, hbar: float = DEFAULT_HBAR) -> np.ndarray:
    if encoding is Encoding.PHASE_SPACE:
        return mean_quadratures(state, hbar)
    return mean_photon_numbers(state)


def energy(
    circuit: Circuit,
    params: Sequence[float],
    problem: ProblemSpec,
    initial: ModeState,
    readout_modes: Optional[Sequence[int]] = None,
) -> float:
    """``F(<x>)`` or ``F(<n>)`` of the circuit output, never ``<F>``."""
    state = run_circuit(circuit, params, initial)
    means = readout_means(state, problem.encoding, circuit.hbar)
    modes = list(readout_modes) if readout_modes is not None else list(range(problem.n_vars))
    return problem.evaluate(means[modes])


@dataclass(frozen=True, eq=False)
class Scenario:
    """A circuit, its input state and the problem read out from it."""

    name: str
    circuit: Circuit
    initial: ModeState
    problem: ProblemSpec
    readout_modes: Tuple[int, ...] = ()
    mirrored_pairs: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        if not self.readout_modes:
            object.__setattr__(self, "readout_modes", tuple(range(self.problem.n_vars)))
        if len(self.readout_modes) != self.problem.n_vars:
            raise ContractViolationError(
                f"{self.problem.name} reads {self.problem.n_vars} modes, got {self.readout_modes}"
            )
        if any(m >= self.circuit.modes for m in self.readout_modes):
            raise ContractViolationError(f"Readout modes {self.readout_modes} exceed the circuit")

    @property
    def n_params(self) -> int:
        return self.circuit.n_params

    def final_state(self, params: Sequence[float]) -> ModeState:
        return run_circuit(self.circuit, params, self.initial)

    def energy(self, params: Sequence[float]) -> float:
        return energy(self.circuit, params, self.problem, self.initial, self.readout_modes)

    __call__ = energy

    def diagnose(
        self,
        params: Sequence[float],
        threshold: float = DISTRIBUTION_THRESHOLD,
        edge_threshold: float = EDGE_THRESHOLD,
    ) -> FinalDiagnostics:
        state = self.final_state(params)
        means = readout_means(state, self.problem.encoding, self.circuit.hbar)
        values = means[list(self.readout_modes)]
        fock = self.problem.encoding is Encoding.FOCK_SPACE
        edge = edge_population(state)
        pair_averaged = None
        if self.mirrored_pairs:
            pair_averaged = [float((means[i] + means[j]) / 2.0) for i, j in self.mirrored_pairs]
        return FinalDiagnostics(
            readout=self.problem.encoding.readout,
            energy=self.problem.evaluate(values),
            means=[float(m) for m in means],
            readout_values=[float(v) for v in values],
            rounded=[int(v) for v in np.rint(values)] if fock else None,
            distribution=fock_probabilities(state, threshold),
            edge_population=edge,
            truncation_safe=edge < edge_threshold,
            pair_averaged=pair_averaged,
        )


def pcqo_scenario(problem: ProblemSpec, layers: int = 1, cutoff: int = 10) -> Scenario:
    """Fixed PCQO layout matching the encoding of ``problem``."""
    build = pcqo_phase_ansatz if problem.encoding is Encoding.PHASE_SPACE else pcqo_fock_ansatz
    circuit = build(problem.n_vars, layers, cutoff, problem.hbar)
    return Scenario(f"pcqo/{problem.name}", circuit, vacuum(problem.n_vars, cutoff), problem)


def experiment_scenario(
    problem: ProblemSpec,
    cutoff: int = 3,
    squeeze_r: float = 1.0,
    full_chip: bool = False,
) -> Scenario:
    circuit = experiment_ansatz(cutoff, full_chip, problem.hbar)
    initial = experiment_initial_state(cutoff, squeeze_r, full_chip, problem.hbar)
    pairs = tuple((i, i + EXPERIMENT_MODES) for i in range(EXPERIMENT_MODES)) if full_chip else ()
    return Scenario(
        f"experiment/{problem.name}" + ("/chip" if full_chip else ""),
        circuit,
        initial,
        problem,
        tuple(range(EXPERIMENT_MODES)),
        pairs,
    )


__all__ = [
    "PHASE_WHITELIST",
    "FOCK_WHITELIST",
    "EXPERIMENT_WHITELIST",
    "repeat_layers",
    "pcqo_phase_ansatz",
    "pcqo_fock_ansatz",
    "pool_ansatz",
    "experiment_ansatz",
    "experiment_initial_state",
    "readout_means",
    "energy",
    "Scenario",
    "pcqo_scenario",
    "experiment_scenario",
]
