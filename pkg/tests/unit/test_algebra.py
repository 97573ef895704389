import itertools
import unittest

import numpy as np

from pcqo.algebra.polynomial import BosonPolynomial, commutator, from_xp, to_matrix
from pcqo.algebra.weyl import weyl_operator, weyl_symbol
from pcqo.core.fock import quadratures
from pcqo.exceptions import ContractViolationError, HbarMismatchError

KEYS = [key for key in itertools.product(range(4), repeat=4) if sum(key) <= 3]


def random_hermitian(rng: np.random.Generator, terms: int = 4) -> BosonPolynomial:
    chosen = rng.choice(len(KEYS), size=terms, replace=False)
    coefficients = rng.normal(size=terms) + 1j * rng.normal(size=terms)
    poly = BosonPolynomial(2, {KEYS[i]: c for i, c in zip(chosen, coefficients)})
    return poly + poly.dagger()


def exact_columns(cutoff: int, margin: int) -> np.ndarray:
    levels = np.arange(cutoff)
    n0, n1 = np.meshgrid(levels, levels, indexing="ij")
    return np.flatnonzero(((n0 <= margin) & (n1 <= margin)).reshape(-1))


class TestBosonPolynomial(unittest.TestCase):

    def test_annihilation_creation_commutator(self):
        a = BosonPolynomial.ladder(0, 1)
        adag = BosonPolynomial.ladder(0, 1, dagger=True)
        self.assertTrue(commutator(a, adag).close_to(BosonPolynomial.constant(1.0, 1)))

    def test_position_momentum_commutator(self):
        x = BosonPolynomial.position(0, 1, hbar=2.0)
        p = BosonPolynomial.momentum(0, 1, hbar=2.0)
        self.assertTrue(commutator(x, p).close_to(BosonPolynomial.constant(2j, 1)))

    def test_normal_ordering_of_a_adag(self):
        a = BosonPolynomial.ladder(0, 1)
        adag = BosonPolynomial.ladder(0, 1, dagger=True)
        product = a * adag
        self.assertAlmostEqual(product.coefficient((1, 1)), 1.0)
        self.assertAlmostEqual(product.coefficient((0, 0)), 1.0)

    def test_dense_realization_of_quadratures(self):
        x, p = quadratures(6)
        self.assertTrue(np.allclose(BosonPolynomial.position(0, 1).to_dense(6), x.matrix))
        self.assertTrue(np.allclose(BosonPolynomial.momentum(0, 1).to_dense(6), p.matrix))

    def test_commutator_matches_dense_matrices(self):
        rng = np.random.default_rng(7)
        cutoff = 14
        columns = exact_columns(cutoff, cutoff - 7)
        for _ in range(50):
            left, right = random_hermitian(rng), random_hermitian(rng)
            dense_left, dense_right = left.to_dense(cutoff), right.to_dense(cutoff)
            expected = dense_left @ dense_right - dense_right @ dense_left
            actual = to_matrix(commutator(left, right), cutoff).matrix
            self.assertLess(np.max(np.abs(actual[:, columns] - expected[:, columns])), 1e-8)

    def test_jacobi_identity(self):
        rng = np.random.default_rng(11)
        a, b, c = (random_hermitian(rng, 3) for _ in range(3))
        total = (
            commutator(a, commutator(b, c))
            + commutator(b, commutator(c, a))
            + commutator(c, commutator(a, b))
        )
        self.assertTrue(total.is_zero(1e-9))

    def test_commutator_of_hermitians_is_anti_hermitian(self):
        rng = np.random.default_rng(3)
        term = commutator(random_hermitian(rng), random_hermitian(rng)) * 1j
        self.assertTrue(term.is_hermitian())

    def test_from_xp_square(self):
        x2 = from_xp([((2,), (0,), 1.0)], 1)
        x = BosonPolynomial.position(0, 1)
        self.assertTrue(x2.close_to(x * x))

    def test_hbar_mismatch(self):
        with self.assertRaises(HbarMismatchError):
            BosonPolynomial.number(0, 1, hbar=1.0) + BosonPolynomial.number(0, 1, hbar=2.0)

    def test_mode_mismatch_and_bad_keys(self):
        with self.assertRaises(ContractViolationError):
            BosonPolynomial.number(0, 1) * BosonPolynomial.number(0, 2)
        with self.assertRaises(ContractViolationError):
            BosonPolynomial(1, {(1, 0, 0): 1.0})

    def test_to_matrix_limited_to_two_modes(self):
        with self.assertRaises(ContractViolationError):
            to_matrix(BosonPolynomial.number(0, 3), 3)

    def test_format_is_stable(self):
        poly = BosonPolynomial.number(0, 1) * 2.0 + 1.0
        self.assertEqual(poly.format(), "1 · 1\n2 · a0† a0")


class TestWeyl(unittest.TestCase):

    def test_symmetrized_xp(self):
        x = BosonPolynomial.position(0, 1)
        p = BosonPolynomial.momentum(0, 1)
        symmetric = (x * p + p * x) * 0.5
        self.assertTrue(weyl_operator((1, 1), 2.0).close_to(symmetric))
        symbol = weyl_symbol(symmetric)
        self.assertAlmostEqual(symbol[(1, 1)], 1.0)
        self.assertTrue(all(abs(c) < 1e-12 for key, c in symbol.items() if key != (1, 1)))

    def test_number_operator_symbol(self):
        symbol = weyl_symbol(BosonPolynomial.number(0, 1, hbar=2.0))
        # n = (x^2 + p^2) / 2hbar - 1/2
        self.assertAlmostEqual(symbol[(2, 0)], 0.25)
        self.assertAlmostEqual(symbol[(0, 2)], 0.25)
        self.assertAlmostEqual(symbol[(0, 0)], -0.5)

    def test_two_mode_weyl_operator_is_hermitian(self):
        op = weyl_operator((1, 0, 0, 1), 2.0)
        self.assertTrue(op.is_hermitian())
        x0 = BosonPolynomial.position(0, 2)
        p1 = BosonPolynomial.momentum(1, 2)
        self.assertTrue(op.close_to(x0 * p1))

    def test_cubic_symbol_recovered(self):
        symbol = weyl_symbol(weyl_operator((3, 0), 2.0))
        self.assertAlmostEqual(symbol[(3, 0)], 1.0)
        self.assertTrue(all(abs(c) < 1e-12 for key, c in symbol.items() if key != (3, 0)))


if __name__ == '__main__':
    unittest.main()
