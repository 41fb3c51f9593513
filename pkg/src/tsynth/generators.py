"""T-count generators R(P), T-depth-1 blocks, and Pauli-to-Z conjugators."""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from .circuit import OMEGA, Circuit, conjugate_by_circuit
from .matrix import canonical_phase
from .pauli import PauliOp, enumerate_paulis, materialize

R_KIND = "R"
RDG_KIND = "RDG"
BLOCK_KIND = "BLOCK"

VN_MAX_QUBITS = 2


@dataclass(frozen=True, eq=False)
class Generator:
    """One search letter: R(P), R(P)^dag, or a T-depth-1 block.

    ``factors`` lists the commuting (P, dagger) pairs whose R/R^dag product is
    ``matrix``; ``circuit`` realizes ``matrix`` exactly with every T/TDG in a
    single stage.
    """

    kind: str
    factors: tuple[tuple[PauliOp, bool], ...]
    matrix: np.ndarray
    circuit: Circuit
    index: int = -1

    @property
    def paulis(self) -> list[PauliOp]:
        return [p for p, _ in self.factors]

    @property
    def label(self) -> str:
        parts = [("Rdg" if dg else "R") + f"({p})" for p, dg in self.factors]
        return "*".join(parts)


def r_matrix(p: PauliOp, dagger: bool = False) -> np.ndarray:
    """``(1+w)/2 I + (1-w)/2 P`` with ``w = exp(i pi/4)`` (conjugated for R^dag)."""
    if p.is_identity:
        raise ValueError("R(P) needs a non-identity Pauli")
    if not p.is_hermitian:
        raise ValueError(f"R(P) needs a Hermitian (+/-) Pauli, got {p}")
    w = OMEGA.conjugate() if dagger else OMEGA
    dim = 1 << p.n
    return (1 + w) / 2 * np.eye(dim) + (1 - w) / 2 * materialize(p)


def conjugator_circuit(p: PauliOp, q: int) -> Circuit:
    """Clifford circuit C with ``C Z_q C^dag = p``.

    Negative sign: X on q first. Then a CNOT ladder collects the parity of
    the support onto one qubit, then per-qubit basis changes (H for X,
    H then S for Y).
    """
    if p.is_identity:
        raise ValueError("cannot conjugate Z onto the identity")
    if not p.is_hermitian:
        raise ValueError(f"target Pauli must be Hermitian, got {p}")
    if not 0 <= q < p.n:
        raise ValueError(f"qubit {q} out of range for {p.n} qubits")
    circ = Circuit(p.n)
    support = p.support
    if p.phase == 2:
        circ.append("X", q)
    pivot = q
    if q not in support:
        pivot = support[0]
        circ.append("CNOT", pivot, q)
        circ.append("CNOT", q, pivot)
    for j in support:
        if j != pivot:
            circ.append("CNOT", j, pivot)
    for j in support:
        letter = p.qubit_letter(j)
        if letter == "X":
            circ.append("H", j)
        elif letter == "Y":
            circ.append("H", j)
            circ.append("S", j)
    return circ


def _r_circuit(p: PauliOp, q: int, dagger: bool) -> Circuit:
    conj = conjugator_circuit(p, q)
    mid = Circuit(p.n, [("TDG" if dagger else "T", q)])
    return conj.inverse() + mid + conj


def r_of_pauli(p: PauliOp, dagger: bool = False) -> Generator:
    """The T-count-1 generator R(P) (or R(P)^dag), targeting P's lowest qubit."""
    mat = r_matrix(p, dagger)
    q = p.support[0]
    return Generator(RDG_KIND if dagger else R_KIND, ((p, dagger),), mat, _r_circuit(p, q, dagger))


@functools.lru_cache(maxsize=None)
def tcount_generators(n: int) -> tuple[Generator, ...]:
    """R(P) for every bare P != I, canonical order."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    out = []
    for p in enumerate_paulis(n)[1:]:
        g = r_of_pauli(p)
        out.append(Generator(g.kind, g.factors, g.matrix, g.circuit, len(out)))
    return tuple(out)


def _phase_key(u: np.ndarray) -> bytes:
    canon = canonical_phase(u)
    q = np.round(np.stack([canon.real, canon.imag]) * 1e9).astype(np.int64)
    return q.tobytes()


@functools.lru_cache(maxsize=None)
def build_vn(n: int) -> tuple[Generator, ...]:
    """The T-depth-1 block set, deduplicated up to global phase.

    For every signed P != +/-I, target qubit q and R or R^dag, the canonical
    conjugator C of (P, q) is fixed; every T/TDG/I configuration on the
    other qubits contributes R-type factors on ``C Z_i C^dag``.
    """
    if not 1 <= n <= VN_MAX_QUBITS:
        raise ValueError(f"V_n is only built for 1 <= n <= {VN_MAX_QUBITS}, got {n}")
    seen: set[bytes] = set()
    blocks: list[Generator] = []
    for p in enumerate_paulis(n, signed=True):
        if p.is_identity:
            continue
        for q in range(n):
            conj = conjugator_circuit(p, q)
            inv = conj.inverse()
            others = [i for i in range(n) if i != q]
            for dagger in (False, True):
                for config in itertools.product((None, "T", "TDG"), repeat=len(others)):
                    factors = [(p, dagger)]
                    mat = r_matrix(p, dagger)
                    stage = Circuit(n, [("TDG" if dagger else "T", q)])
                    for i, t in zip(others, config):
                        if t is None:
                            continue
                        pi = conjugate_by_circuit(PauliOp.single(n, i, "Z"), conj)
                        factors.append((pi, t == "TDG"))
                        mat = mat @ r_matrix(pi, t == "TDG")
                        stage.append(t, i)
                    key = _phase_key(mat)
                    if key in seen:
                        continue
                    seen.add(key)
                    blocks.append(
                        Generator(BLOCK_KIND, tuple(factors), mat, inv + stage + conj, len(blocks))
                    )
    return tuple(blocks)


def generator_set(n: int, mode: str) -> tuple[Generator, ...]:
    if mode == "count":
        return tcount_generators(n)
    if mode == "depth":
        return build_vn(n)
    raise ValueError(f"unknown mode {mode!r}")
