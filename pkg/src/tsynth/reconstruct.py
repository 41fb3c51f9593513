"""Recover the trailing Clifford from a certified residual and emit the circuit."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .certify import TestReport, conjugation_batch
from .circuit import Circuit, conjugate_by_gate
from .generators import Generator
from .matrix import distance, num_qubits, pauli_coefficients, unitarity_deviation
from .pauli import PauliOp, enumerate_paulis, materialize, pauli_index

QUARTER_TURNS = np.array([1, 1j, -1, -1j])


class ReconstructionError(RuntimeError):
    """The residual passed the tests but no exact Clifford could be recovered."""


class NotCliffordError(ValueError):
    pass


def recover_clifford(wp: np.ndarray, report: TestReport, reference: PauliOp | None = None) -> np.ndarray:
    """Clifford C~ with ``C~ = e^{i phi} C_0`` when ``wp ~ E^dag C_0^dag``.

    Ratios ``t_P / t_ref`` of the S_1 coefficients estimate
    ``conj(r_P) / conj(r_ref)``; for a Clifford these are fourth roots of
    unity, so each ratio is snapped to the nearest one before summing.
    """
    n = num_qubits(wp)
    idx = pauli_index(n)
    support = [p for p, _ in report.s1]
    if reference is None:
        ident = PauliOp.identity(n)
        reference = ident if ident in support else support[0]
    if reference.bare not in support:
        raise ValueError(f"reference {reference} is not in the support")
    t_ref = report.coeffs[idx[reference.bare]]
    r = 1 / math.sqrt(report.m_support)
    out = np.zeros(wp.shape, dtype=complex)
    for p in support:
        ratio = report.coeffs[idx[p]] / t_ref
        snapped = QUARTER_TURNS[np.argmin(np.abs(QUARTER_TURNS - ratio / abs(ratio)))]
        out += r * np.conj(snapped) * materialize(p)

    if unitarity_deviation(out) > 1e-8 or not conjugation_batch(out[None], 1e-8)[0]:
        raise ReconstructionError("snapped Pauli expansion is not a Clifford")
    return out


def clifford_tableau(c: np.ndarray, tol: float = 1e-8) -> list[tuple[PauliOp, PauliOp]]:
    """Signed Paulis ``(C X_q C^dag, C Z_q C^dag)`` for each qubit."""
    n = num_qubits(c)
    paulis = enumerate_paulis(n)
    rows = []
    for q in range(n):
        pair = []
        for letter in "XZ":
            img = c @ materialize(PauliOp.single(n, q, letter)) @ c.conj().T
            coeffs = pauli_coefficients(img)
            k = int(np.argmax(np.abs(coeffs)))
            val = coeffs[k]
            if abs(abs(val) - 1) > tol or abs(val.imag) > tol:
                raise NotCliffordError(f"C {letter}_{q} C^dag is not a signed Pauli")
            pair.append(paulis[k] if val.real > 0 else -paulis[k])
        rows.append(tuple(pair))
    return rows


def _tableau_to_circuit(n: int, tableau: list[tuple[PauliOp, PauliOp]]) -> Circuit:
    """Reduce the tableau to the identity by Clifford gates; return the inverse.

    Qubits are cleared in order: first the X image becomes +-X_q, then the
    Z image becomes +-Z_q using gates that fix X_q, and signs are fixed last.
    """
    rows = [list(r) for r in tableau]
    undo: list[tuple] = []

    def apply(*g):
        undo.append(g)
        for r in rows:
            r[0] = conjugate_by_gate(r[0], g)
            r[1] = conjugate_by_gate(r[1], g)

    for i in range(n):
        xi = rows[i][0]
        for j in range(i, n):
            letter = xi.qubit_letter(j)
            if letter == "Z":
                apply("H", j)
            elif letter == "Y":
                apply("S", j)
        xi = rows[i][0]
        if xi.qubit_letter(i) == "I":
            j = next(j for j in range(i + 1, n) if xi.qubit_letter(j) != "I")
            apply("CNOT", j, i)
        for j in range(i + 1, n):
            if rows[i][0].qubit_letter(j) != "I":
                apply("CNOT", i, j)

        zi = rows[i][1]
        for j in range(i + 1, n):
            letter = zi.qubit_letter(j)
            if letter == "X":
                apply("H", j)
            elif letter == "Y":
                apply("S", j)
                apply("H", j)
        for j in range(i + 1, n):
            if rows[i][1].qubit_letter(j) != "I":
                apply("CNOT", j, i)
        if rows[i][1].qubit_letter(i) == "Y":
            apply("H", i)
            apply("S", i)
            apply("H", i)

    for i in range(n):
        xi, zi = rows[i]
        if xi.phase == 2:
            apply("S", i)
            apply("S", i)
        if zi.phase == 2:
            apply("X", i)

    for i, (xi, zi) in enumerate(rows):
        if xi != PauliOp.single(n, i, "X") or zi != PauliOp.single(n, i, "Z"):
            raise AssertionError(f"tableau reduction left qubit {i} at ({xi}, {zi})")
    return Circuit(n, undo).inverse()


def clifford_to_circuit(c: np.ndarray, tol: float = 1e-8) -> Circuit:
    """{H, S, SDG, X, CNOT} circuit equal to ``c`` up to global phase."""
    n = num_qubits(c)
    circ = _tableau_to_circuit(n, clifford_tableau(c, tol))
    d = distance(circ.unitary(), c)
    if d > tol:
        raise NotCliffordError(f"synthesized circuit is off by distance {d:.3g}")
    return circ


@dataclass
class SynthesisResult:
    mode: str
    epsilon: float
    m: int
    generator_indices: tuple[int, ...]
    generators: tuple[Generator, ...] = field(repr=False)
    clifford: np.ndarray = field(repr=False)
    unitary: np.ndarray = field(repr=False)
    achieved_distance: float = 0.0
    circuit: Circuit | None = field(default=None, repr=False)
    report: TestReport | None = field(default=None, repr=False)
    candidates_visited: int = 0

    @property
    def labels(self) -> list[str]:
        return [g.label for g in self.generators]


def assemble(
    w: np.ndarray,
    gens: Sequence[Generator],
    wp: np.ndarray,
    report: TestReport,
    mode: str,
    eps: float,
    strict: bool = True,
) -> SynthesisResult:
    """Build ``U' = (G_1 ... G_m) C~`` and its circuit; check ``d(U', W) <= eps``.

    Raises ``ReconstructionError`` when the Clifford cannot be recovered or
    the assembled unitary misses the target. With ``strict=False`` neither
    failure raises: an unrecoverable Clifford leaves ``clifford`` and
    ``circuit`` as None and ``achieved_distance`` as NaN.
    """
    n = num_qubits(w)
    prod = np.eye(1 << n, dtype=complex)
    for g in gens:
        prod = prod @ g.matrix
    try:
        cliff = recover_clifford(wp, report)
        circ = clifford_to_circuit(cliff)
    except (ReconstructionError, NotCliffordError):
        if strict:
            raise
        return SynthesisResult(mode, eps, len(gens), tuple(g.index for g in gens), tuple(gens),
                               None, prod, math.nan, None, report)
    for g in reversed(gens):
        circ = circ + g.circuit
    u = prod @ cliff
    d = distance(u, w)
    if strict and d > eps + 1e-12:
        raise ReconstructionError(f"assembled unitary is at distance {d:.6g} > {eps:.6g}")
    return SynthesisResult(
        mode=mode,
        epsilon=eps,
        m=len(gens),
        generator_indices=tuple(g.index for g in gens),
        generators=tuple(gens),
        clifford=cliff,
        unitary=u,
        achieved_distance=d,
        circuit=circ,
        report=report,
    )
