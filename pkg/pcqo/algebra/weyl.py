"""Conversions between normal order and Weyl (symmetric) order.

The Weyl symbol of an operator is a commutative polynomial in the phase-space variables
``x, p``; Hermitian operators have real symbols. Symbol keys are flat tuples
``(ex_0, ep_0, ex_1, ep_1, ...)`` of per-mode x and p exponents.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb, factorial
from typing import Dict, Sequence, Tuple

import numpy as np

from pcqo.algebra.polynomial import BosonPolynomial, Key

Symbol = Dict[Key, complex]


def _binomial_alpha_terms(u: int, v: int) -> Dict[Tuple[int, int], complex]:
    """Expand ``(x - i p)^u (x + i p)^v`` into ``{(ex, ep): coeff}``."""
    out: Dict[Tuple[int, int], complex] = {}
    for j in range(u + 1):
        for k in range(v + 1):
            coeff = comb(u, j) * comb(v, k) * (-1j) ** j * (1j) ** k
            key = (u - j + v - k, j + k)
            out[key] = out.get(key, 0.0) + coeff
    return out


@lru_cache(maxsize=None)
def _normal_monomial_symbol(c: int, b: int, hbar: float) -> Tuple[Tuple[Tuple[int, int], complex], ...]:
    """Single-mode Weyl symbol of ``a+^c a^b`` as ``((ex, ep), coeff)`` pairs."""
    scale = 2.0 * np.sqrt(hbar / 2.0)
    out: Dict[Tuple[int, int], complex] = {}
    for k in range(min(c, b) + 1):
        weight = (-0.5) ** k * factorial(k) * comb(c, k) * comb(b, k)
        u, v = c - k, b - k
        norm = weight / scale ** (u + v)
        for key, coeff in _binomial_alpha_terms(u, v).items():
            out[key] = out.get(key, 0.0) + norm * coeff
    return tuple((key, coeff) for key, coeff in out.items() if abs(coeff) > 1e-15)


def weyl_symbol(poly: BosonPolynomial) -> Symbol:
    """Weyl symbol of a normal-ordered polynomial."""
    symbol: Symbol = {}
    for key, coeff in poly.items():
        per_mode = [
            _normal_monomial_symbol(key[2 * mode], key[2 * mode + 1], poly.hbar)
            for mode in range(poly.modes)
        ]
        for combo in itertools.product(*per_mode):
            out_key = tuple(e for (pair, _) in combo for e in pair)
            weight = coeff
            for _, c in combo:
                weight *= c
            symbol[out_key] = symbol.get(out_key, 0.0) + weight
    return symbol


@lru_cache(maxsize=None)
def _weyl_monomial_normal(ex: int, ep: int, hbar: float) -> Tuple[Tuple[Tuple[int, int], complex], ...]:
    """Normal-ordered form of the Weyl-ordered single-mode monomial ``{x^ex p^ep}``."""
    s = np.sqrt(hbar / 2.0)
    # x = s(alpha + alpha*), p = i s(alpha* - alpha); keys are (power of alpha*, power of alpha)
    alpha_terms: Dict[Tuple[int, int], complex] = {}
    for j in range(ex + 1):
        for k in range(ep + 1):
            coeff = comb(ex, j) * comb(ep, k) * (-1) ** (ep - k)
            key = (j + k, ex - j + ep - k)
            alpha_terms[key] = alpha_terms.get(key, 0.0) + coeff
    prefactor = s ** (ex + ep) * (1j) ** ep
    out: Dict[Tuple[int, int], complex] = {}
    for (c, b), coeff in alpha_terms.items():
        for k in range(min(c, b) + 1):
            weight = 0.5**k * factorial(k) * comb(c, k) * comb(b, k)
            key = (c - k, b - k)
            out[key] = out.get(key, 0.0) + prefactor * coeff * weight
    return tuple((key, coeff) for key, coeff in out.items() if abs(coeff) > 1e-15)


def weyl_operator(exponents: Sequence[int], hbar: float, coeff: complex = 1.0) -> BosonPolynomial:
    """Normal-ordered polynomial of the Weyl-ordered monomial with flat ``(ex, ep)`` exponents."""
    modes = len(exponents) // 2
    per_mode = [
        _weyl_monomial_normal(exponents[2 * mode], exponents[2 * mode + 1], hbar)
        for mode in range(modes)
    ]
    terms: Dict[Key, complex] = {}
    for combo in itertools.product(*per_mode):
        key = tuple(e for (pair, _) in combo for e in pair)
        weight = coeff
        for _, c in combo:
            weight *= c
        terms[key] = terms.get(key, 0.0) + weight
    return BosonPolynomial(modes, terms, hbar)


__all__ = ["Symbol", "weyl_symbol", "weyl_operator"]
