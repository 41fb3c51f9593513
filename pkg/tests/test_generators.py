import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tsynth.circuit import Circuit
from tsynth.generators import (
    BLOCK_KIND,
    build_vn,
    conjugator_circuit,
    generator_set,
    r_matrix,
    r_of_pauli,
    tcount_generators,
)
from tsynth.matrix import canonical_phase, distance
from tsynth.pauli import PauliOp, enumerate_paulis, materialize

OMEGA = np.exp(1j * math.pi / 4)
T = np.diag([1, OMEGA])
H = np.array([[1, 1], [1, -1]]) / math.sqrt(2)


def hermitian_paulis(n):
    return [p for p in enumerate_paulis(n, signed=True) if not p.is_identity]


def test_r_examples():
    np.testing.assert_allclose(r_matrix(PauliOp.from_label("Z")), T, atol=1e-15)
    np.testing.assert_allclose(r_matrix(PauliOp.from_label("X")), H @ T @ H, atol=1e-12)
    with pytest.raises(ValueError):
        r_of_pauli(PauliOp.identity(2))
    with pytest.raises(ValueError):
        r_of_pauli(PauliOp.from_label("iX"))


@given(st.sampled_from(hermitian_paulis(2)))
def test_r_inverse_pair(p):
    np.testing.assert_allclose(r_matrix(p) @ r_matrix(p, dagger=True), np.eye(4), atol=1e-12)


def test_r_of_minus_p_is_phase_times_dagger():
    p = PauliOp.from_label("Z")
    a = canonical_phase(OMEGA * r_matrix(p, dagger=True))
    b = canonical_phase(r_matrix(-p))
    np.testing.assert_allclose(a, b, atol=1e-12)


@pytest.mark.parametrize("n,count", [(1, 3), (2, 15), (3, 63)])
def test_tcount_generator_count(n, count):
    gens = tcount_generators(n)
    assert len(gens) == count
    assert [g.index for g in gens] == list(range(count))
    assert [g.paulis[0] for g in gens] == enumerate_paulis(n)[1:]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_generator_circuits_reproduce_matrices(n):
    for g in tcount_generators(n):
        assert distance(g.circuit.unitary(), g.matrix) < 1e-10
        assert g.circuit.t_count == 1


def test_conjugator_examples():
    assert conjugator_circuit(PauliOp.from_label("Z"), 0).gates == []
    assert conjugator_circuit(PauliOp.from_label("X"), 0).gates == [("H", 0)]
    zz = PauliOp.from_label("ZZ")
    c = conjugator_circuit(zz, 0).unitary()
    np.testing.assert_allclose(c @ materialize(PauliOp.from_label("ZI")) @ c.conj().T, materialize(zz), atol=1e-12)


@pytest.mark.parametrize("n", [1, 2])
def test_conjugator_maps_z_to_every_pauli(n):
    for p in hermitian_paulis(n):
        for q in range(n):
            c = conjugator_circuit(p, q).unitary()
            image = c @ materialize(PauliOp.single(n, q, "Z")) @ c.conj().T
            assert np.max(np.abs(image - materialize(p))) <= 1e-10, (p, q)


def test_conjugator_rejects_identity():
    with pytest.raises(ValueError):
        conjugator_circuit(-PauliOp.identity(1), 0)


def test_v1_contents():
    v1 = build_vn(1)
    assert len(v1) <= 24
    keys = {canonical_phase(g.matrix).round(9).tobytes() for g in v1}
    assert canonical_phase(T).round(9).tobytes() in keys
    assert canonical_phase(T.conj()).round(9).tobytes() in keys
    for g in v1:
        assert len(g.factors) == 1


def test_v2_bound_and_structure():
    v2 = build_vn(2)
    assert len(v2) <= 2 * 2 * 12**2
    assert all(g.kind == BLOCK_KIND for g in v2)
    for g in v2:
        prod = np.eye(4, dtype=complex)
        for p, dagger in g.factors:
            prod = prod @ r_matrix(p, dagger)
        np.testing.assert_allclose(prod, g.matrix, atol=1e-12)
        # factors commute and sit on distinct target frames
        for i, (a, _) in enumerate(g.factors):
            for b, _ in g.factors[i + 1:]:
                assert a.commutes(b) and a.bare != b.bare
        assert distance(g.circuit.unitary(), g.matrix) < 1e-10
        assert g.circuit.t_depth == 1
        assert g.circuit.t_count == len(g.factors)


def test_v2_is_deduplicated():
    keys = [canonical_phase(g.matrix).round(8).tobytes() for g in build_vn(2)]
    assert len(set(keys)) == len(keys)


def test_vn_range():
    with pytest.raises(ValueError):
        build_vn(3)
    with pytest.raises(ValueError):
        generator_set(2, "width")


def test_labels():
    assert tcount_generators(1)[0].label == "R(+Z)"
    assert isinstance(build_vn(2)[-1].circuit, Circuit)
