import unittest

import numpy as np

from pcqo.core.fock import fock_state, mean_photon_numbers
from pcqo.exceptions import ContractViolationError, ProblemDefinitionError, SearchSpaceTooLargeError
from pcqo.problems.encodings import (
    Encoding,
    maxclique,
    number_offset,
    rosenbrock,
    toy_sixth,
    two_mode_toy,
    ukp,
)
from pcqo.problems.instances import (
    UKP_INSTANCES,
    adjacency_matrix,
    canonical_maxclique_graph,
    clique_graph,
    ukp_instance,
)
from pcqo.problems.oracle import brute_force_integer_min, maximum_cliques


def triangle():
    return adjacency_matrix(clique_graph([(0, 1), (1, 2), (0, 2)]))


class TestUkp(unittest.TestCase):

    def test_empty_knapsack_energy(self):
        row = ukp_instance(1)
        problem = ukp(row.values, row.weights, row.capacity, 4.0)
        self.assertEqual(problem.evaluate([0, 0, 0]), 400.0)
        self.assertEqual(problem.encoding, Encoding.FOCK_SPACE)

    def test_tabulated_optima(self):
        for row, bound in zip(UKP_INSTANCES, (4, 6)):
            with self.subTest(optimum=row.optimum):
                problem = ukp(row.values, row.weights, row.capacity, row.penalty)
                f_min, minimizers = brute_force_integer_min(problem, bound)
                self.assertEqual(f_min, row.f_min)
                self.assertEqual(minimizers, [row.optimum])
                self.assertEqual(problem.known_optimum.value, row.f_min)

    def test_global_penalty_reading(self):
        row = ukp_instance(1)
        problem = ukp(row.values, row.weights, row.capacity, 4.0)
        self.assertEqual(problem.evaluate([0, 2, 0]), -8.0)

    def test_degree_two_in_numbers(self):
        row = ukp_instance(2)
        problem = ukp(row.values, row.weights, row.capacity, row.penalty)
        self.assertEqual(problem.degree, 2)
        self.assertTrue(all(c != 0 for c in problem.monomials.values()))

    def test_invalid_data(self):
        with self.assertRaises(ProblemDefinitionError):
            ukp([1, 2], [1], 3)
        with self.assertRaises(ProblemDefinitionError):
            ukp([1], [0], 3)
        with self.assertRaises(ProblemDefinitionError):
            ukp([1], [1], 3, penalty=0)

    def test_untabulated_instance_has_no_optimum(self):
        problem = ukp([1, 2], [1, 1], 3)
        self.assertIsNone(problem.known_optimum)


class TestMaxclique(unittest.TestCase):

    def test_triangle(self):
        problem = maxclique(triangle())
        self.assertEqual(problem.evaluate([1, 1, 1]), -3.0)
        self.assertEqual(problem.known_optimum.value, -3.0)

    def test_five_node_instance(self):
        graph = canonical_maxclique_graph(5)
        problem = maxclique(adjacency_matrix(graph))
        f_min, minimizers = brute_force_integer_min(problem, 1)
        self.assertEqual(f_min, -3.0)
        self.assertEqual(minimizers, [(1, 0, 1, 1, 0), (1, 1, 0, 1, 0)])
        self.assertEqual(maximum_cliques(graph), minimizers)

    def test_six_node_instance(self):
        graph = canonical_maxclique_graph(6)
        problem = maxclique(adjacency_matrix(graph))
        f_min, minimizers = brute_force_integer_min(problem, 1)
        self.assertEqual(f_min, -3.0)
        self.assertEqual(len(minimizers), 2)
        self.assertEqual(maximum_cliques(graph), minimizers)

    def test_penalties_exclude_non_cliques(self):
        problem = maxclique(adjacency_matrix(canonical_maxclique_graph(5)))
        # 1 and 2 are not adjacent
        self.assertGreater(problem.evaluate([0, 1, 1, 0, 0]), 0.0)
        # double occupation is penalized
        self.assertGreater(problem.evaluate([2, 0, 0, 0, 0]), problem.evaluate([1, 0, 0, 0, 0]))

    def test_bad_adjacency(self):
        with self.assertRaises(ProblemDefinitionError):
            maxclique(np.array([[0, 1], [0, 0]]))
        with self.assertRaises(ProblemDefinitionError):
            maxclique(np.array([[1, 0], [0, 0]]))
        with self.assertRaises(ProblemDefinitionError):
            maxclique(np.zeros((2, 3)))

    def test_unknown_canonical_graph(self):
        with self.assertRaises(KeyError):
            canonical_maxclique_graph(7)


class TestContinuousProblems(unittest.TestCase):

    def test_rosenbrock_minimum(self):
        problem = rosenbrock(4)
        self.assertEqual(problem.evaluate([1, 1, 1, 1]), 0.0)
        self.assertEqual(problem.evaluate([0, 0, 0, 0]), 3.0)
        self.assertEqual(problem.encoding, Encoding.PHASE_SPACE)
        with self.assertRaises(ProblemDefinitionError):
            rosenbrock(1)

    def test_toy_sixth_optimum(self):
        problem = toy_sixth()
        optimum = problem.known_optimum
        self.assertAlmostEqual(problem.evaluate(optimum.optimizers[0]), optimum.value, places=5)
        self.assertEqual(problem.degree, 6)

    def test_toy_sixth_local_refinement(self):
        problem = toy_sixth()
        center = np.array(problem.known_optimum.optimizers[0])
        rng = np.random.default_rng(5)
        points = center + rng.uniform(-0.05, 0.05, size=(2000, 3))
        self.assertGreaterEqual(problem.evaluate_many(points).min(), problem.known_optimum.value - 1e-6)

    def test_evaluate_checks_length(self):
        with self.assertRaises(ContractViolationError):
            rosenbrock(3).evaluate([1, 1])


class TestOracle(unittest.TestCase):

    def test_phase_space_problem_is_rejected(self):
        with self.assertRaises(ContractViolationError):
            brute_force_integer_min(rosenbrock(2), 2)

    def test_search_space_limit(self):
        with self.assertRaises(SearchSpaceTooLargeError):
            brute_force_integer_min(two_mode_toy(), 100, max_points=1000)

    def test_per_variable_bounds(self):
        f_min, minimizers = brute_force_integer_min(number_offset(2.0), [3])
        self.assertEqual((f_min, minimizers), (0.0, [(2,)]))

    def test_ties_are_all_reported(self):
        f_min, minimizers = brute_force_integer_min(two_mode_toy(), 1)
        self.assertAlmostEqual(f_min, 0.0625)
        self.assertEqual(len(minimizers), 8)


class TestReadout(unittest.TestCase):

    def test_fock_readout_of_pattern(self):
        state = fock_state((0, 2, 0), 4)
        row = ukp_instance(1)
        problem = ukp(row.values, row.weights, row.capacity)
        self.assertEqual(problem.evaluate(mean_photon_numbers(state)), -8.0)


if __name__ == '__main__':
    unittest.main()
