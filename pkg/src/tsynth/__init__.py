"""Resource-optimal Clifford+T synthesis of small approximately implementable unitaries.

Searches words over R(P) (T-count) or T-depth-1 blocks (T-depth), certifies
that the leftover factor is within eps of a Clifford, recovers that Clifford
exactly and emits a Clifford+T circuit.
"""

from .budget import ErrorBudget, compose_mult2, compose_sequence, compose_tensor, qft_budget
from .certify import TestReport, amplitude_test, certify, conjugation_test
from .circuit import Circuit
from .generators import Generator, generator_set
from .matrix import distance, pauli_spectrum
from .pauli import PauliOp, enumerate_paulis, materialize
from .reconstruct import ReconstructionError, SynthesisResult, clifford_to_circuit, recover_clifford
from .search import BudgetExceeded, EpsilonRegimeError, SearchConfig, decide, min_resource
from .targets import TargetSpec, crz, givens, load_matrix, qft

__all__ = [
    "BudgetExceeded", "Circuit", "EpsilonRegimeError", "ErrorBudget", "Generator", "PauliOp",
    "ReconstructionError", "SearchConfig", "SynthesisResult", "TargetSpec", "TestReport",
    "amplitude_test", "certify", "clifford_to_circuit", "compose_mult2", "compose_sequence",
    "compose_tensor", "conjugation_test", "crz", "decide", "distance", "enumerate_paulis",
    "generator_set", "givens", "load_matrix", "materialize", "min_resource", "pauli_spectrum",
    "qft", "qft_budget", "recover_clifford",
]
