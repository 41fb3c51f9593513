import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tsynth.circuit import (
    Circuit,
    CircuitFormatError,
    conjugate_by_circuit,
    random_clifford_circuit,
)
from tsynth.matrix import distance
from tsynth.pauli import PauliOp, enumerate_paulis, materialize

H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)

gate_lists = st.lists(
    st.one_of(
        st.tuples(st.sampled_from(["H", "S", "SDG", "X", "T", "TDG"]), st.integers(0, 2)),
        st.tuples(st.just("CNOT"), st.integers(0, 2), st.integers(0, 2)).filter(lambda g: g[1] != g[2]),
    ),
    max_size=12,
)


def test_unitary_time_order():
    circ = Circuit(2, [("H", 0), ("CNOT", 0, 1)])
    np.testing.assert_allclose(circ.unitary(), CNOT @ np.kron(H, np.eye(2)), atol=1e-15)


def test_bad_gates():
    with pytest.raises(ValueError):
        Circuit(1, [("CNOT", 0, 0)])
    with pytest.raises(ValueError):
        Circuit(2, [("H", 2)])
    with pytest.raises(ValueError):
        Circuit(1, [("RZ", 0)])


@given(gate_lists)
def test_text_round_trip_and_inverse(gates):
    circ = Circuit(3, gates)
    again = Circuit.from_text(circ.to_text())
    assert again.gates == circ.gates
    np.testing.assert_allclose(circ.unitary() @ circ.inverse().unitary(), np.eye(8), atol=1e-12)


def test_text_format():
    text = Circuit(2, [("CNOT", 0, 1), ("TDG", 1)]).to_text()
    assert text == "qubits 2\nCNOT 0 1\nTDG 1\n"
    with pytest.raises(CircuitFormatError):
        Circuit.from_text("CNOT 0 1\n")
    with pytest.raises(CircuitFormatError):
        Circuit.from_text("qubits 1\nFOO 0\n")


def test_t_count_and_depth():
    circ = Circuit(2, [("T", 0), ("T", 1), ("H", 0), ("TDG", 0), ("CNOT", 0, 1), ("T", 1)])
    assert circ.t_count == 4
    assert circ.t_depth == 3
    assert Circuit(2).t_depth == 0


@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_symbolic_conjugation_matches_matrices(n, seed):
    circ = random_clifford_circuit(n, np.random.default_rng(seed), length=15)
    u = circ.unitary()
    for p in enumerate_paulis(n):
        image = conjugate_by_circuit(p, circ)
        np.testing.assert_allclose(materialize(image), u @ materialize(p) @ u.conj().T, atol=1e-12)


def test_random_clifford_is_reproducible():
    a = random_clifford_circuit(2, np.random.default_rng(5))
    b = random_clifford_circuit(2, np.random.default_rng(5))
    assert a.gates == b.gates and a.t_count == 0
    assert distance(a.unitary(), b.unitary()) == 0


def test_conjugate_pauli_single_gate():
    assert conjugate_by_circuit(PauliOp.from_label("X"), Circuit(1, [("H", 0)])) == PauliOp.from_label("Z")
    assert conjugate_by_circuit(PauliOp.from_label("X"), Circuit(1, [("S", 0)])) == PauliOp.from_label("Y")
