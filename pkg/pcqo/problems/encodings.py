"""Benchmark cost functions and their operator Hamiltonians.

Every problem is a sympy expression in its classical variables. Phase-space problems
substitute ``x_i -> x̂_i``; Fock-space problems substitute ``n_i -> a_i+ a_i``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
import sympy

from pcqo.algebra.polynomial import BosonPolynomial, from_xp
from pcqo.core.fock import DEFAULT_HBAR
from pcqo.exceptions import ContractViolationError, ProblemDefinitionError

LOGGER = logging.getLogger("pcqo.problems")

Monomials = Dict[Tuple[int, ...], float]


class Encoding(Enum):
    PHASE_SPACE = "phase-space"
    FOCK_SPACE = "fock-space"

    @property
    def readout(self) -> str:
        return "x" if self is Encoding.PHASE_SPACE else "n"


@dataclass(frozen=True)
class KnownOptimum:
    value: float
    optimizers: Tuple[Tuple[float, ...], ...]

    def to_dict(self) -> dict:
        return {"value": self.value, "optimizers": [list(o) for o in self.optimizers]}


@dataclass(eq=False)
class ProblemSpec:
    name: str
    encoding: Encoding
    variables: Tuple[sympy.Symbol, ...]
    expression: sympy.Expr
    known_optimum: Optional[KnownOptimum] = None
    penalties: Dict[str, float] = field(default_factory=dict)
    hbar: float = DEFAULT_HBAR
    graph: Optional[nx.Graph] = None

    def __post_init__(self):
        self.variables = tuple(self.variables)
        self.expression = sympy.expand(self.expression)
        self._evaluator = sympy.lambdify(self.variables, self.expression, "numpy")
        LOGGER.debug("Problem %s over %d variables: %s", self.name, len(self.variables), self.expression)

    @property
    def n_vars(self) -> int:
        return len(self.variables)

    def evaluate(self, values: Sequence[float]) -> float:
        values = np.asarray(values, dtype=float).reshape(-1)
        if values.size != self.n_vars:
            raise ContractViolationError(f"{self.name} takes {self.n_vars} variables, got {values.size}")
        return float(self._evaluator(*values))

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Vectorized evaluation of an ``(M, N)`` array of points."""
        points = np.asarray(points, dtype=float)
        result = self._evaluator(*points.T)
        return np.broadcast_to(np.asarray(result, dtype=float), (points.shape[0],)).copy()

    @cached_property
    def monomials(self) -> Monomials:
        """Exponent tuple -> real coefficient of the expanded polynomial."""
        poly = sympy.Poly(self.expression, *self.variables)
        return {tuple(int(e) for e in exps): float(coeff) for exps, coeff in poly.terms()}

    @property
    def degree(self) -> int:
        return max((sum(exps) for exps in self.monomials), default=0)

    @cached_property
    def hamiltonian(self) -> BosonPolynomial:
        if self.encoding is Encoding.PHASE_SPACE:
            zeros = (0,) * self.n_vars
            return from_xp(
                [(exps, zeros, coeff) for exps, coeff in self.monomials.items()],
                self.n_vars,
                self.hbar,
            )
        return number_polynomial(self.monomials, self.n_vars, self.hbar)

    def mixer(self, x0: Optional[float] = None, p0: Optional[float] = None) -> BosonPolynomial:
        """Default mixer of the encoding: ``sum (p - p0)^2`` or ``sum (x - x0)^2 + (p - p0)^2``."""
        if self.encoding is Encoding.PHASE_SPACE:
            return phase_space_mixer(self.n_vars, PHASE_MIXER_OFFSET if p0 is None else p0, self.hbar)
        return fock_mixer(
            self.n_vars,
            FOCK_MIXER_OFFSET if x0 is None else x0,
            FOCK_MIXER_OFFSET if p0 is None else p0,
            self.hbar,
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "encoding": self.encoding.value,
            "variables": self.n_vars,
            "expression": str(self.expression),
            "penalties": dict(self.penalties),
            "known_optimum": self.known_optimum.to_dict() if self.known_optimum else None,
        }


# ---- Operator substitutions ----

FOCK_MIXER_OFFSET = 1.0
# with p0 = 0 the gauge potential is odd in p and the pure x^k families vanish
PHASE_MIXER_OFFSET = 1.0


def number_polynomial(monomials: Monomials, modes: int, hbar: float = DEFAULT_HBAR) -> BosonPolynomial:
    """``sum c prod_i n_i^e_i`` with ``n_i = a_i+ a_i``."""
    powers: Dict[Tuple[int, int], BosonPolynomial] = {}
    result = BosonPolynomial.zero(modes, hbar)
    for exps, coeff in monomials.items():
        term = BosonPolynomial.constant(coeff, modes, hbar)
        for mode, exponent in enumerate(exps):
            if exponent:
                if (mode, exponent) not in powers:
                    powers[(mode, exponent)] = BosonPolynomial.number(mode, modes, hbar) ** exponent
                term = term * powers[(mode, exponent)]
        result = result + term
    return result


def _shifted_square(exps_of: Callable[[list, float], list], modes: int, offset: float) -> List[tuple]:
    terms = []
    for mode in range(modes):
        unit = [0] * modes
        unit[mode] = 1
        square = [0] * modes
        square[mode] = 2
        terms.extend(exps_of(square, 1.0))
        if offset:
            terms.extend(exps_of(unit, -2.0 * offset))
            terms.extend(exps_of([0] * modes, offset**2))
    return terms


def phase_space_mixer(modes: int, p0: float = PHASE_MIXER_OFFSET, hbar: float = DEFAULT_HBAR) -> BosonPolynomial:
    zeros = [0] * modes
    terms = _shifted_square(lambda exps, c: [(zeros, exps, c)], modes, p0)
    return from_xp(terms, modes, hbar)


def fock_mixer(modes: int, x0: float = FOCK_MIXER_OFFSET, p0: float = FOCK_MIXER_OFFSET, hbar: float = DEFAULT_HBAR) -> BosonPolynomial:
    zeros = [0] * modes
    terms = _shifted_square(lambda exps, c: [(exps, zeros, c)], modes, x0)
    terms += _shifted_square(lambda exps, c: [(zeros, exps, c)], modes, p0)
    return from_xp(terms, modes, hbar)


def _variables(prefix: str, count: int) -> Tuple[sympy.Symbol, ...]:
    return tuple(sympy.symbols(f"{prefix}0:{count}", real=True))


# ---- Phase-space problems ----


def rosenbrock(n: int = 4, hbar: float = DEFAULT_HBAR) -> ProblemSpec:
    if n < 2:
        raise ProblemDefinitionError(f"Rosenbrock needs at least 2 variables, got {n}")
    x = _variables("x", n)
    expr = sum(100 * (x[i + 1] - x[i] ** 2) ** 2 + (1 - x[i]) ** 2 for i in range(n - 1))
    return ProblemSpec(
        name=f"rosenbrock-{n}",
        encoding=Encoding.PHASE_SPACE,
        variables=x,
        expression=expr,
        known_optimum=KnownOptimum(0.0, ((1.0,) * n,)),
        hbar=hbar,
    )


TOY_SIXTH_OPTIMUM = KnownOptimum(-0.028457, ((-1.42212, -0.127017, -1.29723),))


def toy_sixth(hbar: float = DEFAULT_HBAR) -> ProblemSpec:
    x1, x2, x3 = _variables("x", 3)
    expr = (
        (x1**3 + x2**3 + x3**3 - x1 + 2 * x2 - 3 * x3) ** 2
        + (-x1 + x2 + x3) ** 2
        + sympy.Rational(1, 100) * (x1 + x2 + x3)
    )
    return ProblemSpec(
        name="toy-sixth",
        encoding=Encoding.PHASE_SPACE,
        variables=(x1, x2, x3),
        expression=expr,
        known_optimum=TOY_SIXTH_OPTIMUM,
        hbar=hbar,
    )


# ---- Fock-space problems ----


def ukp(
    values: Sequence[float],
    weights: Sequence[float],
    capacity: float,
    penalty: float = 4.0,
    hbar: float = DEFAULT_HBAR,
) -> ProblemSpec:
    """Unbounded knapsack with the soft constraint ``penalty * (sum w_i n_i - C)^2``."""
    if len(values) != len(weights) or not values:
        raise ProblemDefinitionError(
            f"UKP needs equally many values and weights, got {len(values)} and {len(weights)}"
        )
    if any(w <= 0 for w in weights):
        raise ProblemDefinitionError(f"UKP weights must be positive, got {list(weights)}")
    if penalty <= 0:
        raise ProblemDefinitionError(f"UKP penalty must be positive, got {penalty}")
    n = _variables("n", len(values))
    v = [sympy.nsimplify(value) for value in values]
    w = [sympy.nsimplify(weight) for weight in weights]
    load = sum(wi * ni for wi, ni in zip(w, n))
    expr = -sum(vi * ni for vi, ni in zip(v, n)) + sympy.nsimplify(penalty) * (load - sympy.nsimplify(capacity)) ** 2

    from pcqo.problems.instances import find_ukp_instance

    instance = find_ukp_instance(values, weights, capacity, penalty)
    known = KnownOptimum(instance.f_min, (instance.optimum,)) if instance else None
    return ProblemSpec(
        name=f"ukp-{len(values)}",
        encoding=Encoding.FOCK_SPACE,
        variables=n,
        expression=expr,
        known_optimum=known,
        penalties={"delta": float(penalty)},
        hbar=hbar,
    )


def validate_adjacency(adjacency: np.ndarray) -> np.ndarray:
    adjacency = np.asarray(adjacency)
    if adjacency.ndim != 2 or adjacency.shape[0] != adjacency.shape[1]:
        raise ProblemDefinitionError(f"Adjacency must be square, got shape {adjacency.shape}")
    if not np.isin(adjacency, (0, 1)).all():
        raise ProblemDefinitionError("Adjacency entries must be 0 or 1")
    if not np.array_equal(adjacency, adjacency.T):
        raise ProblemDefinitionError("Adjacency must be symmetric")
    if np.any(np.diag(adjacency)):
        raise ProblemDefinitionError("Adjacency must have a zero diagonal")
    return adjacency.astype(int)


def maxclique(
    adjacency: np.ndarray,
    penalty_edge: float = 10.0,
    penalty_degree: float = 1.0,
    hbar: float = DEFAULT_HBAR,
) -> ProblemSpec:
    """Max clique: ``-sum n_i + d1 sum_{i!=j} (1 - Z_ij) n_i n_j + d2 sum n_i (n_i - 1)``."""
    adjacency = validate_adjacency(adjacency)
    size = adjacency.shape[0]
    n = _variables("n", size)
    d1 = sympy.nsimplify(penalty_edge)
    d2 = sympy.nsimplify(penalty_degree)
    expr = -sum(n)
    expr += d1 * sum(
        (1 - int(adjacency[i, j])) * n[i] * n[j] for i in range(size) for j in range(size) if i != j
    )
    expr += d2 * sum(ni * (ni - 1) for ni in n)
    graph = nx.from_numpy_array(adjacency)
    spec = ProblemSpec(
        name=f"maxclique-{size}",
        encoding=Encoding.FOCK_SPACE,
        variables=n,
        expression=expr,
        penalties={"delta1": float(penalty_edge), "delta2": float(penalty_degree)},
        hbar=hbar,
        graph=graph,
    )

    from pcqo.problems.oracle import brute_force_integer_min

    f_min, optimizers = brute_force_integer_min(spec, 1)
    spec.known_optimum = KnownOptimum(f_min, tuple(tuple(float(v) for v in o) for o in optimizers))
    return spec


def two_mode_toy(hbar: float = DEFAULT_HBAR) -> ProblemSpec:
    """``(n_0 + n_2 - 0.75)^2`` over four simulated modes."""
    n = _variables("n", 4)
    expr = (n[0] + n[2] - sympy.Rational(3, 4)) ** 2
    return ProblemSpec(
        name="two-mode-toy",
        encoding=Encoding.FOCK_SPACE,
        variables=n,
        expression=expr,
        known_optimum=KnownOptimum(0.0, ((0.75, 0.0, 0.0, 0.0), (0.375, 0.0, 0.375, 0.0))),
        hbar=hbar,
    )


def number_offset(target: float = 1.0, hbar: float = DEFAULT_HBAR) -> ProblemSpec:
    """Single mode ``(n - target)^2``."""
    (n0,) = _variables("n", 1)
    return ProblemSpec(
        name="number-offset",
        encoding=Encoding.FOCK_SPACE,
        variables=(n0,),
        expression=(n0 - sympy.nsimplify(target)) ** 2,
        known_optimum=KnownOptimum(0.0, ((float(target),),)),
        hbar=hbar,
    )


__all__ = [
    "Encoding",
    "KnownOptimum",
    "ProblemSpec",
    "FOCK_MIXER_OFFSET",
    "PHASE_MIXER_OFFSET",
    "number_polynomial",
    "phase_space_mixer",
    "fock_mixer",
    "rosenbrock",
    "toy_sixth",
    "ukp",
    "validate_adjacency",
    "maxclique",
    "two_mode_toy",
    "number_offset",
]
