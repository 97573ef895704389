from .algebra.pool import Connectivity, PoolOperator, nested_pool, select_ansatz
from .algebra.polynomial import BosonPolynomial, commutator, to_matrix
from .core.fock import DEFAULT_HBAR, ModeState, TruncatedOperator, fock_state, vacuum
from .core.gates import Circuit, GateKind, GateSpec, ParamRef, make_gate, run_circuit
from .engine.ansatz import Scenario, energy, experiment_ansatz, pcqo_fock_ansatz, pcqo_phase_ansatz
from .engine.models import OptimizerConfig, RunRecord
from .engine.optimizers import adam_optimize, derivative_free_optimize, fd_gradient
from .engine.service import multi_start
from .exceptions import PcqoError
from .problems.encodings import Encoding, ProblemSpec, maxclique, rosenbrock, toy_sixth, ukp
from .problems.oracle import brute_force_integer_min
from .qaoa import QaoaMode, QaoaVariant, build_cvqaoa

__version__ = "0.1.0"
__all__ = [
    "DEFAULT_HBAR",
    "ModeState",
    "TruncatedOperator",
    "vacuum",
    "fock_state",
    "GateKind",
    "ParamRef",
    "GateSpec",
    "Circuit",
    "make_gate",
    "run_circuit",
    "BosonPolynomial",
    "commutator",
    "to_matrix",
    "Connectivity",
    "PoolOperator",
    "nested_pool",
    "select_ansatz",
    "Encoding",
    "ProblemSpec",
    "rosenbrock",
    "toy_sixth",
    "ukp",
    "maxclique",
    "brute_force_integer_min",
    "Scenario",
    "energy",
    "pcqo_phase_ansatz",
    "pcqo_fock_ansatz",
    "experiment_ansatz",
    "OptimizerConfig",
    "RunRecord",
    "fd_gradient",
    "adam_optimize",
    "derivative_free_optimize",
    "multi_start",
    "QaoaMode",
    "QaoaVariant",
    "build_cvqaoa",
    "PcqoError",
]
