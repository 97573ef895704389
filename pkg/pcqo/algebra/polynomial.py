"""Normal-ordered polynomials in bosonic ladder operators.

A monomial key is the flat tuple ``(c_0, b_0, c_1, b_1, ...)`` standing for
``prod_i a_i^+^{c_i} a_i^{b_i}``. Products are brought back to normal order with the
single-mode identity ``a^m a+^n = sum_k C(m,k) C(n,k) k! a+^(n-k) a^(m-k)``.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb, factorial
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from pcqo.core.fock import DEFAULT_HBAR, TruncatedOperator, annihilation, check_cutoff
from pcqo.exceptions import ContractViolationError, HbarMismatchError

Key = Tuple[int, ...]
Scalar = Union[int, float, complex]

PRUNE_TOL = 1e-12


@lru_cache(maxsize=None)
def _reorder(annihilations: int, creations: int) -> Tuple[Tuple[int, int], ...]:
    return tuple(
        (k, comb(annihilations, k) * comb(creations, k) * factorial(k))
        for k in range(min(annihilations, creations) + 1)
    )


@lru_cache(maxsize=1 << 16)
def _monomial_product(left: Key, right: Key) -> Tuple[Tuple[Key, int], ...]:
    per_mode = []
    for mode in range(len(left) // 2):
        c1, b1 = left[2 * mode], left[2 * mode + 1]
        c2, b2 = right[2 * mode], right[2 * mode + 1]
        if b1 == 0 or c2 == 0:
            per_mode.append(((c1 + c2, b1 + b2, 1),))
        else:
            per_mode.append(
                tuple((c1 + c2 - k, b1 + b2 - k, weight) for k, weight in _reorder(b1, c2))
            )
    out = []
    for combo in itertools.product(*per_mode):
        key: List[int] = []
        weight = 1
        for c, b, w in combo:
            key.extend((c, b))
            weight *= w
        out.append((tuple(key), weight))
    return tuple(out)


class BosonPolynomial:
    """Immutable normal-ordered polynomial over ``modes`` bosonic modes."""

    __slots__ = ("modes", "hbar", "_terms")

    def __init__(self, modes: int, terms: Optional[Mapping[Key, Scalar]] = None, hbar: float = DEFAULT_HBAR):
        if modes < 1:
            raise ContractViolationError(f"A polynomial needs at least one mode, got {modes}")
        self.modes = int(modes)
        self.hbar = float(hbar)
        cleaned: Dict[Key, complex] = {}
        for key, coeff in (terms or {}).items():
            key = tuple(int(e) for e in key)
            if len(key) != 2 * self.modes or any(e < 0 for e in key):
                raise ContractViolationError(f"Monomial key {key} does not fit {self.modes} modes")
            coeff = complex(coeff)
            if not np.isfinite(coeff):
                raise ContractViolationError(f"Non-finite coefficient {coeff} for {key}")
            if abs(coeff) > PRUNE_TOL:
                cleaned[key] = coeff
        self._terms = cleaned

    # ---- Constructors ----

    @classmethod
    def zero(cls, modes: int, hbar: float = DEFAULT_HBAR) -> "BosonPolynomial":
        return cls(modes, {}, hbar)

    @classmethod
    def constant(cls, value: Scalar, modes: int, hbar: float = DEFAULT_HBAR) -> "BosonPolynomial":
        return cls(modes, {(0,) * (2 * modes): value}, hbar)

    @classmethod
    def monomial(cls, exponents: Sequence[Tuple[int, int]], coeff: Scalar = 1.0, hbar: float = DEFAULT_HBAR):
        """``coeff * prod_i a_i+^c_i a_i^b_i`` from per-mode ``(c_i, b_i)`` pairs."""
        key = tuple(e for pair in exponents for e in pair)
        return cls(len(exponents), {key: coeff}, hbar)

    @classmethod
    def ladder(cls, mode: int, modes: int, dagger: bool = False, hbar: float = DEFAULT_HBAR):
        _check_mode(mode, modes)
        key = [0] * (2 * modes)
        key[2 * mode + (0 if dagger else 1)] = 1
        return cls(modes, {tuple(key): 1.0}, hbar)

    @classmethod
    def number(cls, mode: int, modes: int, hbar: float = DEFAULT_HBAR) -> "BosonPolynomial":
        _check_mode(mode, modes)
        key = [0] * (2 * modes)
        key[2 * mode] = key[2 * mode + 1] = 1
        return cls(modes, {tuple(key): 1.0}, hbar)

    @classmethod
    def position(cls, mode: int, modes: int, hbar: float = DEFAULT_HBAR) -> "BosonPolynomial":
        scale = np.sqrt(hbar / 2.0)
        return (cls.ladder(mode, modes, False, hbar) + cls.ladder(mode, modes, True, hbar)) * scale

    @classmethod
    def momentum(cls, mode: int, modes: int, hbar: float = DEFAULT_HBAR) -> "BosonPolynomial":
        scale = 1j * np.sqrt(hbar / 2.0)
        return (cls.ladder(mode, modes, True, hbar) - cls.ladder(mode, modes, False, hbar)) * scale

    # ---- Container protocol ----

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Key]:
        return iter(self._terms)

    def items(self) -> Iterable[Tuple[Key, complex]]:
        return self._terms.items()

    def coefficient(self, key: Sequence[int]) -> complex:
        return self._terms.get(tuple(key), 0.0 + 0.0j)

    @property
    def terms(self) -> Dict[Key, complex]:
        return dict(self._terms)

    @property
    def degree(self) -> int:
        return max((sum(key) for key in self._terms), default=0)

    def is_zero(self, tol: float = PRUNE_TOL) -> bool:
        return all(abs(c) <= tol for c in self._terms.values())

    def max_abs(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    # ---- Arithmetic ----

    def _check(self, other: "BosonPolynomial"):
        if self.modes != other.modes:
            raise ContractViolationError(f"Mode counts differ: {self.modes} vs {other.modes}")
        if self.hbar != other.hbar:
            raise HbarMismatchError(self.hbar, other.hbar)

    def _lift(self, other: Union["BosonPolynomial", Scalar]) -> "BosonPolynomial":
        if isinstance(other, BosonPolynomial):
            self._check(other)
            return other
        return BosonPolynomial.constant(other, self.modes, self.hbar)

    def __add__(self, other):
        other = self._lift(other)
        terms = dict(self._terms)
        for key, coeff in other.items():
            terms[key] = terms.get(key, 0.0) + coeff
        return BosonPolynomial(self.modes, terms, self.hbar)

    __radd__ = __add__

    def __neg__(self):
        return BosonPolynomial(self.modes, {k: -c for k, c in self._terms.items()}, self.hbar)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, BosonPolynomial):
            return BosonPolynomial(self.modes, {k: c * other for k, c in self._terms.items()}, self.hbar)
        self._check(other)
        terms: Dict[Key, complex] = {}
        for left, c1 in self._terms.items():
            for right, c2 in other._terms.items():
                coeff = c1 * c2
                for key, weight in _monomial_product(left, right):
                    terms[key] = terms.get(key, 0.0) + coeff * weight
        return BosonPolynomial(self.modes, terms, self.hbar)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ContractViolationError("Negative powers are not polynomials")
        result = BosonPolynomial.constant(1.0, self.modes, self.hbar)
        for _ in range(exponent):
            result = result * self
        return result

    def dagger(self) -> "BosonPolynomial":
        terms = {}
        for key, coeff in self._terms.items():
            swapped = tuple(key[i + 1] if i % 2 == 0 else key[i - 1] for i in range(len(key)))
            terms[swapped] = np.conj(coeff)
        return BosonPolynomial(self.modes, terms, self.hbar)

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        scale = max(1.0, self.max_abs())
        return (self - self.dagger()).max_abs() <= tol * scale

    def close_to(self, other: "BosonPolynomial", tol: float = 1e-10) -> bool:
        return (self - other).max_abs() <= tol

    def __repr__(self):
        return f"BosonPolynomial(modes={self.modes}, terms={len(self)}, hbar={self.hbar})"

    # ---- Realization ----

    def to_dense(self, cutoff: int) -> np.ndarray:
        """Matrix over the ``D**modes`` product basis, mode 0 slowest."""
        cutoff = check_cutoff(cutoff)
        a = annihilation(cutoff).matrix
        adag = a.conj().T
        dim = cutoff**self.modes
        matrix = np.zeros((dim, dim), dtype=complex)

        @lru_cache(maxsize=None)
        def factor(c: int, b: int) -> np.ndarray:
            return np.linalg.matrix_power(adag, c) @ np.linalg.matrix_power(a, b)

        for key, coeff in self._terms.items():
            product = np.ones((1, 1), dtype=complex)
            for mode in range(self.modes):
                product = np.kron(product, factor(key[2 * mode], key[2 * mode + 1]))
            matrix += coeff * product
        return matrix

    def format(self, precision: int = 6) -> str:
        """Stable text listing ``coeff · a†^j a^k ⊗ ...``, one term per line."""
        lines = []
        for key in sorted(self._terms, key=lambda k: (sum(k), k)):
            coeff = self._terms[key]
            factors = []
            for mode in range(self.modes):
                c, b = key[2 * mode], key[2 * mode + 1]
                parts = []
                if c:
                    parts.append(f"a{mode}†" + (f"^{c}" if c > 1 else ""))
                if b:
                    parts.append(f"a{mode}" + (f"^{b}" if b > 1 else ""))
                if parts:
                    factors.append(" ".join(parts))
            body = " ⊗ ".join(factors) if factors else "1"
            lines.append(f"{_format_complex(coeff, precision)} · {body}")
        return "\n".join(lines) if lines else "0"


def _format_complex(value: complex, precision: int) -> str:
    real = round(value.real, precision) + 0.0
    imag = round(value.imag, precision) + 0.0
    if imag == 0.0:
        return f"{real:.{precision}g}"
    if real == 0.0:
        return f"{imag:.{precision}g}i"
    return f"({real:.{precision}g}{imag:+.{precision}g}i)"


def _check_mode(mode: int, modes: int):
    if not 0 <= mode < modes:
        raise ContractViolationError(f"Mode {mode} out of range for {modes} modes")


def commutator(left: BosonPolynomial, right: BosonPolynomial) -> BosonPolynomial:
    """``[A, B] = AB - BA`` in normal order."""
    left._check(right)
    return left * right - right * left


def from_xp(
    xp_terms: Iterable[Tuple[Sequence[int], Sequence[int], Scalar]],
    modes: int,
    hbar: float = DEFAULT_HBAR,
) -> BosonPolynomial:
    """Substitute quadratures into ``sum coeff * prod_i x_i^e_i p_i^f_i`` (x left of p)."""
    powers: Dict[Tuple[str, int, int], BosonPolynomial] = {}

    def power(kind: str, mode: int, exponent: int) -> BosonPolynomial:
        cache_key = (kind, mode, exponent)
        if cache_key not in powers:
            base = (BosonPolynomial.position if kind == "x" else BosonPolynomial.momentum)(mode, modes, hbar)
            powers[cache_key] = base**exponent
        return powers[cache_key]

    result = BosonPolynomial.zero(modes, hbar)
    for x_exps, p_exps, coeff in xp_terms:
        if len(x_exps) != modes or len(p_exps) != modes:
            raise ContractViolationError(f"xp term ({x_exps}, {p_exps}) does not fit {modes} modes")
        term = BosonPolynomial.constant(coeff, modes, hbar)
        for mode in range(modes):
            if x_exps[mode]:
                term = term * power("x", mode, x_exps[mode])
            if p_exps[mode]:
                term = term * power("p", mode, p_exps[mode])
        result = result + term
    return result


def to_matrix(poly: BosonPolynomial, cutoff: int) -> TruncatedOperator:
    """Realize a one- or two-mode polynomial as a truncated operator."""
    if poly.modes > 2:
        raise ContractViolationError(
            f"TruncatedOperator holds at most two modes, polynomial has {poly.modes}; use to_dense"
        )
    return TruncatedOperator(poly.to_dense(cutoff), cutoff, poly.modes, poly.hbar)


__all__ = [
    "Key",
    "PRUNE_TOL",
    "BosonPolynomial",
    "commutator",
    "from_xp",
    "to_matrix",
]
