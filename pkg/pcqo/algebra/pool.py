"""Counterdiabatic operator pool from the nested-commutator gauge potential.

With ``H_a = (1 - l) H_m + l H_p`` and ``dH = H_p - H_m`` the order-``k`` term of the
gauge potential is ``i [H_a, [H_a, ... [H_a, dH]]]`` with ``2k - 1`` brackets. The schedule
``l`` is kept as a formal variable; every power of it contributes its own monomials. A
pool family is one monomial of the Weyl symbol of that Hermitian operator, and its
generator is the corresponding Weyl-ordered monomial.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from pcqo.algebra.polynomial import BosonPolynomial, Key, commutator
from pcqo.algebra.weyl import weyl_symbol, weyl_operator
from pcqo.core.gates import GateKind, GateSpec
from pcqo.exceptions import (
    ContractViolationError,
    DegeneratePoolError,
    NoRealizableAnsatzError,
)

LOGGER = logging.getLogger("pcqo.pool")

FAMILY_RTOL = 1e-9
FAMILY_ATOL = 1e-12
MODE_LETTERS = "ijklmnopqr"

Pattern = Tuple[Tuple[int, int], ...]
LambdaPolynomial = Dict[int, BosonPolynomial]


class Connectivity(Enum):
    NEAREST_NEIGHBOR = "nearest-neighbor"
    ALL_TO_ALL = "all-to-all"

    @classmethod
    def values(cls) -> List[str]:
        return [item.value for item in cls]

    def edges(self, modes: int) -> List[Tuple[int, int]]:
        if self is Connectivity.NEAREST_NEIGHBOR:
            return [(i, i + 1) for i in range(modes - 1)]
        return list(combinations(range(modes), 2))


@dataclass(frozen=True, eq=False)
class PoolOperator:
    generator: BosonPolynomial
    label: str
    degree: int
    arity: int
    modes: Tuple[int, ...]
    exponents: Key
    order: int
    weight: float

    @property
    def pattern(self) -> Pattern:
        return canonical_pattern(self.exponents)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "modes": list(self.modes),
            "degree": self.degree,
            "arity": self.arity,
            "order": self.order,
            "weight": self.weight,
        }


# ---- Family labels ----


def _touched(exponents: Sequence[int]) -> List[Tuple[int, int, int]]:
    return [
        (mode, exponents[2 * mode], exponents[2 * mode + 1])
        for mode in range(len(exponents) // 2)
        if exponents[2 * mode] or exponents[2 * mode + 1]
    ]


def _canonical_order(exponents: Sequence[int]) -> List[Tuple[int, int, int]]:
    return sorted(_touched(exponents), key=lambda t: (-(t[1] + t[2]), -t[1], t[0]))


def canonical_pattern(exponents: Sequence[int]) -> Pattern:
    """Per-mode ``(ex, ep)`` of the touched modes in a permutation-invariant order."""
    return tuple((ex, ep) for _, ex, ep in _canonical_order(exponents))


def family_label(exponents: Sequence[int]) -> str:
    parts = []
    for letter, (_, ex, ep) in zip(MODE_LETTERS, _canonical_order(exponents)):
        if ex:
            parts.append(f"x_{letter}" + (f"^{ex}" if ex > 1 else ""))
        if ep:
            parts.append(f"p_{letter}" + (f"^{ep}" if ep > 1 else ""))
    return " ".join(parts) if parts else "1"


# ---- Nested commutators ----


def _bracket(schedule: LambdaPolynomial, operand: LambdaPolynomial) -> LambdaPolynomial:
    out: LambdaPolynomial = {}
    for p, left in schedule.items():
        for q, right in operand.items():
            term = commutator(left, right)
            if len(term) == 0:
                continue
            out[p + q] = out[p + q] + term if p + q in out else term
    return {power: poly for power, poly in out.items() if len(poly)}


def _check_inputs(mixer: BosonPolynomial, problem: BosonPolynomial):
    if mixer.modes != problem.modes:
        raise ContractViolationError(f"Mode counts differ: {mixer.modes} vs {problem.modes}")
    if mixer.hbar != problem.hbar:
        raise ContractViolationError(f"hbar differs: {mixer.hbar} vs {problem.hbar}")
    for name, poly in (("mixer", mixer), ("problem", problem)):
        if not poly.is_hermitian():
            raise ContractViolationError(f"The {name} Hamiltonian is not Hermitian")


def gauge_terms(mixer: BosonPolynomial, problem: BosonPolynomial, order: int) -> Dict[int, LambdaPolynomial]:
    """Order ``k`` -> nested commutator split by powers of the schedule variable."""
    if order < 1:
        raise ContractViolationError(f"Expansion order must be >= 1, got {order}")
    _check_inputs(mixer, problem)
    base = commutator(problem, mixer)
    if base.is_zero(1e-10 * max(1.0, mixer.max_abs() * problem.max_abs())):
        raise DegeneratePoolError(mixer.format(), problem.format())
    schedule: LambdaPolynomial = {0: mixer, 1: problem - mixer}
    nested = _bracket(schedule, {0: problem - mixer})
    terms = {1: nested}
    for k in range(2, order + 1):
        nested = _bracket(schedule, _bracket(schedule, nested))
        terms[k] = nested
    return terms


def nested_pool(
    mixer: BosonPolynomial,
    problem: BosonPolynomial,
    order: int = 2,
    rtol: float = FAMILY_RTOL,
) -> List[PoolOperator]:
    """Monomial families of the order-``order`` gauge potential, sorted by (degree, arity, label)."""
    found: Dict[Key, PoolOperator] = {}
    for k, by_power in gauge_terms(mixer, problem, order).items():
        for power in sorted(by_power):
            symbol = weyl_symbol(by_power[power] * 1j)
            symbol.pop((0,) * (2 * mixer.modes), None)
            if not symbol:
                continue
            largest = max(abs(c) for c in symbol.values())
            threshold = max(FAMILY_ATOL, rtol * largest)
            for exponents, coeff in symbol.items():
                if abs(coeff) <= threshold:
                    continue
                if abs(coeff.imag) > 1e-6 * max(1.0, abs(coeff)):
                    raise ContractViolationError(
                        f"Gauge term at order {k} has a complex Weyl coefficient {coeff} at {exponents}"
                    )
                if exponents in found:
                    existing = found[exponents]
                    if abs(coeff) > existing.weight:
                        found[exponents] = _pool_operator(exponents, existing.order, abs(coeff), mixer.hbar)
                    continue
                found[exponents] = _pool_operator(exponents, k, abs(coeff), mixer.hbar)
    pool = sorted(found.values(), key=lambda op: (op.degree, op.arity, op.label, op.exponents))
    LOGGER.info(
        "Pool of order %d: %d operators in %d families",
        order,
        len(pool),
        len({op.label for op in pool}),
    )
    return pool


def _pool_operator(exponents: Key, order: int, weight: float, hbar: float) -> PoolOperator:
    touched = _touched(exponents)
    return PoolOperator(
        generator=weyl_operator(exponents, hbar),
        label=family_label(exponents),
        degree=sum(exponents),
        arity=len(touched),
        modes=tuple(mode for mode, _, _ in touched),
        exponents=tuple(exponents),
        order=order,
        weight=weight,
    )


def pool_labels(pool: Iterable[PoolOperator]) -> List[str]:
    """Distinct family labels in pool order."""
    seen: Dict[str, None] = {}
    for op in pool:
        seen.setdefault(op.label, None)
    return list(seen)


# ---- Ansatz selection ----


def realizes(kind: GateKind, pattern: Pattern, single_mode_squeeze: bool = False) -> bool:
    """Whether ``kind`` exponentiates the monomial family with canonical ``pattern``."""
    arity = len(pattern)
    degree = sum(ex + ep for ex, ep in pattern)
    if kind in (GateKind.X, GateKind.DISP):
        return arity == 1 and degree == 1
    if kind is GateKind.R:
        return pattern in (((2, 0),), ((0, 2),))
    if kind is GateKind.QUAD_PHASE:
        return pattern == ((2, 0),)
    if kind is GateKind.PZ:
        return pattern == ((0, 2),)
    if kind is GateKind.SQUEEZE:
        return single_mode_squeeze and pattern == ((1, 1),)
    if kind is GateKind.CZ:
        return pattern == ((1, 0), (1, 0))
    if kind in (GateKind.BS, GateKind.TWO_MODE_SQUEEZE):
        # phase 0: x_i p_j - p_i x_j for BS, x_i p_j + p_i x_j for TMS
        return pattern == ((1, 0), (0, 1))
    if kind is GateKind.CUBIC_PHASE:
        return pattern == ((3, 0),)
    if kind is GateKind.KERR:
        return arity == 1 and degree == 4 and all(ex % 2 == 0 and ep % 2 == 0 for ex, ep in pattern)
    if kind is GateKind.CROSS_KERR:
        return arity == 2 and all(ex + ep == 2 and ex % 2 == 0 for ex, ep in pattern)
    return False


def select_ansatz(
    pool: Sequence[PoolOperator],
    whitelist: Iterable[Union[GateKind, str]],
    connectivity: Union[Connectivity, str] = Connectivity.NEAREST_NEIGHBOR,
    modes: Optional[int] = None,
    single_mode_squeeze: bool = False,
) -> List[GateSpec]:
    """Gate templates realizing the whitelisted pool families, one slot per gate.

    Order: the single-mode kind realizing the earliest pool family, then all two-mode
    kinds on the connectivity edges, then the remaining single-mode kinds.
    """
    if not pool:
        raise ContractViolationError("select_ansatz needs a non-empty pool")
    kinds = [k if isinstance(k, GateKind) else GateKind.find(k) for k in whitelist]
    connectivity = Connectivity(connectivity)
    modes = modes if modes is not None else pool[0].generator.modes

    first_hit: Dict[GateKind, int] = {}
    for index, op in enumerate(pool):
        for kind in kinds:
            if kind not in first_hit and realizes(kind, op.pattern, single_mode_squeeze):
                first_hit[kind] = index
    if not first_hit:
        raise NoRealizableAnsatzError([k.symbol for k in kinds], pool_labels(pool))

    enum_order = list(GateKind)
    ranked = sorted(first_hit, key=lambda k: (first_hit[k], enum_order.index(k)))
    single = [k for k in ranked if k.arity == 1]
    double = [k for k in ranked if k.arity == 2]
    layout = single[:1] + double + single[1:]

    templates: List[GateSpec] = []
    for kind in layout:
        sites = [(m,) for m in range(modes)] if kind.arity == 1 else connectivity.edges(modes)
        for targets in sites:
            templates.append(GateSpec.template(kind, targets, len(templates)))
    LOGGER.info(
        "Selected ansatz %s with Q=%d",
        " -> ".join(k.symbol for k in layout),
        len(templates),
    )
    return templates


def format_pool(pool: Sequence[PoolOperator], precision: int = 6) -> str:
    """Stable listing of pool operators with their normal-ordered generators."""
    blocks = []
    for op in pool:
        header = f"[{op.label}] modes={','.join(map(str, op.modes))} degree={op.degree} order={op.order}"
        body = "\n".join("    " + line for line in op.generator.format(precision).splitlines())
        blocks.append(header + "\n" + body)
    return "\n".join(blocks)


__all__ = [
    "Connectivity",
    "PoolOperator",
    "canonical_pattern",
    "family_label",
    "gauge_terms",
    "nested_pool",
    "pool_labels",
    "realizes",
    "select_ansatz",
    "format_pool",
]
