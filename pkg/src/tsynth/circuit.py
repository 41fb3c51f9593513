"""Gate-list circuits over {H, S, SDG, X, T, TDG, CNOT} and their text format.

Text format::

    qubits 2
    H 0
    CNOT 0 1
    TDG 1
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .pauli import PauliOp, pauli_mul

OMEGA = np.exp(1j * np.pi / 4)

GATE_ARITY = {"H": 1, "S": 1, "SDG": 1, "X": 1, "T": 1, "TDG": 1, "CNOT": 2}
INVERSE = {"H": "H", "S": "SDG", "SDG": "S", "X": "X", "T": "TDG", "TDG": "T", "CNOT": "CNOT"}
CLIFFORD_GATES = frozenset({"H", "S", "SDG", "X", "CNOT"})

SINGLE_QUBIT = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "S": np.diag([1, 1j]).astype(complex),
    "SDG": np.diag([1, -1j]).astype(complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "T": np.diag([1, OMEGA]),
    "TDG": np.diag([1, OMEGA.conjugate()]),
}
CNOT_MATRIX = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)

Gate = tuple  # (name, q) or ("CNOT", control, target)


class CircuitFormatError(ValueError):
    pass


@dataclass
class Circuit:
    n: int
    gates: list[Gate] = field(default_factory=list)

    def __post_init__(self):
        for g in self.gates:
            _check_gate(g, self.n)

    def append(self, name: str, *qubits: int) -> None:
        g = (name, *qubits)
        _check_gate(g, self.n)
        self.gates.append(g)

    def extend(self, gates: Iterable[Gate]) -> None:
        for g in gates:
            self.append(*g)

    def __add__(self, other: Circuit) -> Circuit:
        if other.n != self.n:
            raise ValueError("qubit count mismatch")
        return Circuit(self.n, self.gates + other.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def inverse(self) -> Circuit:
        return Circuit(self.n, [(INVERSE[g[0]], *g[1:]) for g in reversed(self.gates)])

    @property
    def t_count(self) -> int:
        return sum(1 for g in self.gates if g[0] in ("T", "TDG"))

    @property
    def t_depth(self) -> int:
        """Number of T stages along the critical path.

        Single-qubit Cliffords do not move a qubit's stage; a CNOT syncs its
        two qubits to the later of their stages.
        """
        stage = [0] * self.n
        for g in self.gates:
            if g[0] in ("T", "TDG"):
                stage[g[1]] += 1
            elif g[0] == "CNOT":
                stage[g[1]] = stage[g[2]] = max(stage[g[1]], stage[g[2]])
        return max(stage, default=0)

    def unitary(self) -> np.ndarray:
        u = np.eye(1 << self.n, dtype=complex)
        for g in self.gates:
            u = gate_matrix(g, self.n) @ u
        return u

    def to_text(self) -> str:
        lines = [f"qubits {self.n}"]
        lines += [" ".join([g[0], *map(str, g[1:])]) for g in self.gates]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> Circuit:
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("qubits"):
            raise CircuitFormatError("missing 'qubits <n>' header")
        try:
            n = int(lines[0].split()[1])
        except (IndexError, ValueError) as exc:
            raise CircuitFormatError(f"bad header {lines[0]!r}") from exc
        circ = cls(n)
        for lineno, ln in enumerate(lines[1:], start=2):
            parts = ln.split()
            try:
                circ.append(parts[0].upper(), *map(int, parts[1:]))
            except (ValueError, KeyError) as exc:
                raise CircuitFormatError(f"line {lineno}: {ln!r}: {exc}") from exc
        return circ


def _check_gate(g: Gate, n: int) -> None:
    name, qubits = g[0], g[1:]
    if name not in GATE_ARITY:
        raise ValueError(f"unknown gate {name!r}")
    if len(qubits) != GATE_ARITY[name]:
        raise ValueError(f"{name} takes {GATE_ARITY[name]} qubit(s), got {qubits}")
    if any(not 0 <= q < n for q in qubits) or len(set(qubits)) != len(qubits):
        raise ValueError(f"bad qubit indices {qubits} for {n} qubits")


@functools.lru_cache(maxsize=None)
def _gate_matrix(g: Gate, n: int) -> np.ndarray:
    dim = 1 << n
    if g[0] == "CNOT":
        c, t = g[1], g[2]
        cbit, tbit = 1 << (n - 1 - c), 1 << (n - 1 - t)
        perm = np.arange(dim)
        perm = np.where(perm & cbit, perm ^ tbit, perm)
        out = np.zeros((dim, dim), dtype=complex)
        out[perm, np.arange(dim)] = 1
    else:
        q = g[1]
        out = np.kron(np.kron(np.eye(1 << q), SINGLE_QUBIT[g[0]]), np.eye(1 << (n - 1 - q)))
    out.setflags(write=False)
    return out


def gate_matrix(g: Gate, n: int) -> np.ndarray:
    return _gate_matrix(tuple(g), n)


# -- Clifford action on Paulis ---------------------------------------------

_ONE_QUBIT_IMAGES = {
    # gate: (image of X, image of Z) as single-qubit labels
    "H": ("Z", "X"),
    "S": ("Y", "Z"),
    "SDG": ("-Y", "Z"),
    "X": ("X", "-Z"),
}


@functools.lru_cache(maxsize=None)
def _generator_images(g: Gate, n: int) -> tuple[tuple[PauliOp, PauliOp], ...]:
    """(g X_q g^dag, g Z_q g^dag) for every qubit q."""
    out = []
    for q in range(n):
        x_img, z_img = PauliOp.single(n, q, "X"), PauliOp.single(n, q, "Z")
        if g[0] == "CNOT":
            c, t = g[1], g[2]
            if q == c:
                x_img = x_img * PauliOp.single(n, t, "X")
            if q == t:
                z_img = PauliOp.single(n, c, "Z") * z_img
        elif g[0] in _ONE_QUBIT_IMAGES and q == g[1]:
            xl, zl = _ONE_QUBIT_IMAGES[g[0]]
            x_img = _signed_single(n, q, xl)
            z_img = _signed_single(n, q, zl)
        elif g[0] not in CLIFFORD_GATES:
            raise ValueError(f"{g[0]} is not a Clifford gate")
        out.append((x_img, z_img))
    return tuple(out)


def _signed_single(n: int, q: int, label: str) -> PauliOp:
    p = PauliOp.single(n, q, label.lstrip("-"))
    return -p if label.startswith("-") else p


def conjugate_pauli(p: PauliOp, images: Iterable[tuple[PauliOp, PauliOp]]) -> PauliOp:
    """Image of ``p`` under the Clifford whose action on each X_q, Z_q is given."""
    out = PauliOp(p.n, phase=p.phase)
    for q, (x_img, z_img) in enumerate(images):
        letter = p.qubit_letter(q)
        if letter in "XY":
            out = pauli_mul(out, x_img)
        if letter in "ZY":
            out = pauli_mul(out, z_img)
        if letter == "Y":
            out = out.scaled(1)  # Y = i X Z
    return out


def conjugate_by_gate(p: PauliOp, g: Gate) -> PauliOp:
    """``g p g^dag`` for a Clifford gate."""
    return conjugate_pauli(p, _generator_images(tuple(g), p.n))


def conjugate_by_circuit(p: PauliOp, circ: Circuit) -> PauliOp:
    """``C p C^dag`` where C is the unitary of ``circ``."""
    for g in circ.gates:
        p = conjugate_by_gate(p, g)
    return p


def random_clifford_circuit(n: int, rng: np.random.Generator, length: int | None = None) -> Circuit:
    """Random word over {H, S, CNOT}; long enough to scramble small n."""
    length = length if length is not None else 20 * n * n + 10
    circ = Circuit(n)
    for _ in range(length):
        kind = rng.integers(3) if n > 1 else rng.integers(2)
        if kind == 0:
            circ.append("H", int(rng.integers(n)))
        elif kind == 1:
            circ.append("S", int(rng.integers(n)))
        else:
            c, t = rng.choice(n, size=2, replace=False)
            circ.append("CNOT", int(c), int(t))
    return circ
