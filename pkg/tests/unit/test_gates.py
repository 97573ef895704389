import unittest

import numpy as np

from pcqo.core.cache import GateCache
from pcqo.core.fock import TruncatedOperator, hermitian_exp, quadratures, vacuum
from pcqo.core.gates import (
    GATE_CACHE,
    Circuit,
    GateKind,
    GateSpec,
    ParamRef,
    make_gate,
    prepare_state,
    run_circuit,
)
from pcqo.exceptions import CircuitError, ContractViolationError, GateSpecError

SAMPLE_PARAMS = {
    GateKind.R: (0.4,),
    GateKind.DISP: (0.3, -0.2),
    GateKind.SQUEEZE: (0.25, 0.7),
    GateKind.BS: (0.5, 0.3),
    GateKind.QUAD_PHASE: (0.2,),
    GateKind.CZ: (0.3,),
    GateKind.TWO_MODE_SQUEEZE: (0.2, 0.1),
    GateKind.CUBIC_PHASE: (0.15,),
    GateKind.KERR: (0.1,),
    GateKind.CROSS_KERR: (0.1,),
    GateKind.X: (0.3,),
    GateKind.PZ: (0.2,),
}


class TestGateKind(unittest.TestCase):

    def test_find_by_symbol_or_name(self):
        self.assertIs(GateKind.find("CZ"), GateKind.CZ)
        self.assertIs(GateKind.find("twomodesqueeze"), GateKind.TWO_MODE_SQUEEZE)
        self.assertIs(GateKind.find("cross_kerr"), GateKind.CROSS_KERR)
        with self.assertRaises(GateSpecError):
            GateKind.find("Toffoli")

    def test_every_kind_has_sample_params(self):
        self.assertEqual(set(SAMPLE_PARAMS), set(GateKind))


class TestMakeGate(unittest.TestCase):

    def test_gates_are_unitary(self):
        for kind, params in SAMPLE_PARAMS.items():
            with self.subTest(kind=kind.symbol):
                gate = make_gate(kind, params, 6)
                self.assertEqual(gate.arity, kind.arity)
                self.assertTrue(gate.is_unitary(1e-9))

    def test_zero_magnitude_is_identity(self):
        for kind in GateKind:
            zeros = (0.0,) * kind.n_params
            gate = make_gate(kind, zeros, 4)
            self.assertTrue(np.allclose(gate.matrix, np.eye(4**kind.arity)))

    def test_pz_matches_momentum_square_exponential(self):
        cutoff, hbar, s = 8, 2.0, 0.7
        _, p = quadratures(cutoff, hbar)
        generator = (p @ p) * (1.0 / (2.0 * hbar))
        generator = TruncatedOperator((generator.matrix + generator.matrix.conj().T) / 2, cutoff)
        expected = hermitian_exp(generator, s).matrix
        self.assertLess(np.max(np.abs(make_gate(GateKind.PZ, (s,), cutoff, hbar).matrix - expected)), 1e-9)

    def test_wrong_parameter_count(self):
        with self.assertRaises(GateSpecError):
            make_gate(GateKind.BS, (0.1,), 4)

    def test_non_finite_parameter(self):
        with self.assertRaises(GateSpecError):
            make_gate(GateKind.R, (float("inf"),), 4)

    def test_cache_reuses_matrices(self):
        GATE_CACHE.clear()
        first = make_gate(GateKind.KERR, (0.123,), 5)
        second = make_gate(GateKind.KERR, (0.123,), 5)
        self.assertIs(first.matrix, second.matrix)
        self.assertGreaterEqual(GATE_CACHE.hits, 1)


class TestGateCache(unittest.TestCase):

    def setUp(self):
        self.built = []
        self.cache = GateCache(self.build, maxsize=2)

    def build(self, key):
        self.built.append(key)
        return np.eye(2)

    def test_evicts_least_recent(self):
        self.cache("a")
        self.cache("b")
        self.cache("a")
        self.cache("c")
        self.cache("b")
        self.assertEqual(self.built, ["a", "b", "c", "b"])
        self.assertEqual(len(self.cache), 2)
        self.assertEqual(self.cache.hits, 1)

    def test_matrices_are_read_only(self):
        matrix = self.cache("a")
        self.assertIs(matrix, self.cache("a"))
        with self.assertRaises(ValueError):
            matrix[0, 0] = 2.0

    def test_resize_starts_empty(self):
        self.cache("a")
        self.cache.resize(1)
        self.assertEqual(len(self.cache), 0)
        self.cache("a")
        self.cache("b")
        self.assertEqual(len(self.cache), 1)
        self.assertEqual(self.cache.maxsize, 1)

    def test_size_must_be_positive(self):
        with self.assertRaises(ContractViolationError):
            self.cache.resize(0)


class TestCircuit(unittest.TestCase):

    def test_build_counts_slots(self):
        gates = [GateSpec.template(GateKind.X, (m,), m) for m in range(3)]
        gates.append(GateSpec.template(GateKind.CZ, (0, 1), 3))
        circuit = Circuit.build(3, 4, gates)
        self.assertEqual(circuit.n_params, 4)

    def test_template_fixes_phase(self):
        spec = GateSpec.template(GateKind.TWO_MODE_SQUEEZE, (0, 1), 2)
        self.assertEqual(spec.slots, (2,))
        self.assertEqual(spec.resolve(np.array([0.0, 0.0, 0.8])), (0.8, 0.0))

    def test_unreferenced_slot(self):
        with self.assertRaises(CircuitError):
            Circuit(2, 4, (GateSpec.template(GateKind.X, (0,), 1),), 2)

    def test_target_outside_circuit(self):
        with self.assertRaises(CircuitError):
            Circuit.build(2, 4, [GateSpec.template(GateKind.X, (2,), 0)])

    def test_bad_spec(self):
        with self.assertRaises(GateSpecError):
            GateSpec.template(GateKind.CZ, (0,), 0)
        with self.assertRaises(GateSpecError):
            GateSpec.template(GateKind.CZ, (1, 1), 0)
        with self.assertRaises(GateSpecError):
            ParamRef.bind(-1)

    def test_shared_slot_with_scale(self):
        gates = [GateSpec(GateKind.R, (m,), (ParamRef.bind(0, -2.0),)) for m in range(2)]
        circuit = Circuit.build(2, 3, gates)
        self.assertEqual(circuit.n_params, 1)
        self.assertEqual(gates[0].resolve(np.array([0.25])), (-0.5,))

    def test_run_circuit_zero_params_is_identity(self):
        gates = [GateSpec.template(GateKind.X, (m,), m) for m in range(2)]
        gates.append(GateSpec.template(GateKind.CZ, (0, 1), 2))
        circuit = Circuit.build(2, 5, gates)
        initial = vacuum(2, 5)
        final = run_circuit(circuit, np.zeros(3), initial)
        self.assertTrue(np.allclose(final.amplitudes, initial.amplitudes))

    def test_run_circuit_checks_parameter_count(self):
        circuit = Circuit.build(1, 4, [GateSpec.template(GateKind.R, (0,), 0)])
        with self.assertRaises(CircuitError):
            run_circuit(circuit, np.zeros(2), vacuum(1, 4))
        with self.assertRaises(CircuitError):
            run_circuit(circuit, np.zeros(1), vacuum(1, 5))

    def test_concatenate_shifts_slots(self):
        first = Circuit.build(1, 4, [GateSpec.template(GateKind.R, (0,), 0)])
        second = Circuit.build(1, 4, [GateSpec.template(GateKind.KERR, (0,), 0)])
        joined = first.concatenate(second)
        self.assertEqual(joined.n_params, 2)
        self.assertEqual(joined.gates[1].slots, (1,))

    def test_prepare_state_rejects_free_slots(self):
        with self.assertRaises(GateSpecError):
            prepare_state([GateSpec.template(GateKind.R, (0,), 0)], vacuum(1, 3))


if __name__ == '__main__':
    unittest.main()
