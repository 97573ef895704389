"""Continuous-variable QAOA for problems quadratic in photon numbers.

The cost layer ``exp(-iγ F(n))`` is exact as a product of R, Kerr and CrossKerr gates
since every term is diagonal in the Fock basis. The mixer ``exp(-iβ Σ p_i²)`` is one Pz
gate per mode.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Tuple

from pcqo.core.fock import DEFAULT_HBAR, ModeState, vacuum
from pcqo.core.gates import Circuit, GateKind, GateSpec, ParamRef, prepare_state
from pcqo.engine.ansatz import Scenario
from pcqo.exceptions import ContractViolationError, NotDecomposableError
from pcqo.problems.encodings import Encoding, ProblemSpec

LOGGER = logging.getLogger("pcqo.qaoa")


class QaoaMode(str, Enum):
    SHARED_ANGLE = "shared-angle"
    MULTI_ANGLE = "multi-angle"


@dataclass(frozen=True)
class QaoaVariant:
    mode: QaoaMode = QaoaMode.SHARED_ANGLE
    layers: int = 1
    squeeze_r: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "mode", QaoaMode(self.mode))
        if self.layers < 1:
            raise ContractViolationError(f"QAOA needs at least one layer, got {self.layers}")


@dataclass(frozen=True)
class QuadraticCoefficients:
    """``F(n) = constant + Σ linear_i n_i + Σ square_i n_i² + Σ_{i<j} cross_ij n_i n_j``."""

    constant: float
    linear: Dict[int, float]
    square: Dict[int, float]
    cross: Dict[Tuple[int, int], float]


def quadratic_coefficients(problem: ProblemSpec) -> QuadraticCoefficients:
    if problem.encoding is not Encoding.FOCK_SPACE:
        raise NotDecomposableError(f"{problem.name} is not Fock-encoded")
    constant = 0.0
    linear: Dict[int, float] = {}
    square: Dict[int, float] = {}
    cross: Dict[Tuple[int, int], float] = {}
    for exponents, coeff in problem.monomials.items():
        touched = [(i, e) for i, e in enumerate(exponents) if e]
        if not touched:
            constant += coeff
        elif len(touched) == 1 and touched[0][1] in (1, 2):
            i, e = touched[0]
            (linear if e == 1 else square)[i] = coeff
        elif len(touched) == 2 and all(e == 1 for _, e in touched):
            cross[(touched[0][0], touched[1][0])] = coeff
        else:
            raise NotDecomposableError(
                f"{problem.name} has the term {coeff:g}·n^{exponents}; only degree <= 2 in n is supported"
            )
    return QuadraticCoefficients(constant, linear, square, cross)


def qaoa_cost_unitary(problem: ProblemSpec, slot: int, per_gate: bool = False) -> List[GateSpec]:
    """Gates of ``exp(-iγ F(n))`` with the global phase dropped.

    With ``per_gate`` each gate gets its own slot starting at ``slot``; otherwise all
    gates share ``slot`` as γ.
    """
    coefficients = quadratic_coefficients(problem)
    terms = (
        [(GateKind.R, (i,), a) for i, a in sorted(coefficients.linear.items())]
        + [(GateKind.KERR, (i,), b) for i, b in sorted(coefficients.square.items())]
        + [(GateKind.CROSS_KERR, pair, c) for pair, c in sorted(coefficients.cross.items())]
    )
    gates = []
    for index, (kind, targets, coeff) in enumerate(terms):
        target_slot = slot + index if per_gate else slot
        gates.append(GateSpec(kind, targets, (ParamRef.bind(target_slot, -coeff),)))
    return gates


def qaoa_mixer(slot: int, modes: int, hbar: float) -> List[GateSpec]:
    """``exp(-iβ p²)`` on every mode; Pz(s) is ``exp(i s p² / 2ħ)`` so ``s = -2ħβ``."""
    return [GateSpec(GateKind.PZ, (m,), (ParamRef.bind(slot, -2.0 * hbar),)) for m in range(modes)]


def qaoa_initial_state(modes: int, cutoff: int, squeeze_r: float = 1.0, hbar: float = DEFAULT_HBAR) -> ModeState:
    squeeze = (ParamRef.fixed(squeeze_r), ParamRef.fixed(0.0))
    gates = [GateSpec(GateKind.SQUEEZE, (m,), squeeze) for m in range(modes)]
    return prepare_state(gates, vacuum(modes, cutoff), hbar)


def build_cvqaoa(problem: ProblemSpec, variant: QaoaVariant, cutoff: int = 10) -> Tuple[Circuit, ModeState]:
    modes = problem.n_vars
    per_gate = variant.mode is QaoaMode.MULTI_ANGLE
    gates: List[GateSpec] = []
    slot = 0
    for _ in range(variant.layers):
        cost = qaoa_cost_unitary(problem, slot, per_gate)
        slot += len(cost) if per_gate else 1
        gates.extend(cost)
        gates.extend(qaoa_mixer(slot, modes, problem.hbar))
        slot += 1
    circuit = Circuit.build(modes, cutoff, gates, problem.hbar)
    LOGGER.info("CV-QAOA %s with p=%d on %s: Q=%d", variant.mode.value, variant.layers, problem.name, circuit.n_params)
    return circuit, qaoa_initial_state(modes, cutoff, variant.squeeze_r, problem.hbar)


def cvqaoa_scenario(problem: ProblemSpec, variant: QaoaVariant, cutoff: int = 10) -> Scenario:
    circuit, initial = build_cvqaoa(problem, variant, cutoff)
    return Scenario(f"cvqaoa-{variant.mode.value}/{problem.name}", circuit, initial, problem)


__all__ = [
    "QaoaMode",
    "QaoaVariant",
    "QuadraticCoefficients",
    "quadratic_coefficients",
    "qaoa_cost_unitary",
    "qaoa_mixer",
    "qaoa_initial_state",
    "build_cvqaoa",
    "cvqaoa_scenario",
]
