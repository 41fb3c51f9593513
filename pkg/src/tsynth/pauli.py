"""Signed n-qubit Pauli operators as (x, z) bitmasks with exact phase tracking.

Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of a
computational-basis index; mask bit ``n - 1 - q`` belongs to qubit ``q`` so the
integer masks read like the tensor string.

The stored phase multiplies the tensor product of the Hermitian single-qubit
matrices I, X, Y, Z, where Y = i X Z.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

_LETTERS = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_PHASE_LABEL = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_PHASE_VALUE = (1, 1j, -1, -1j)


def _popcount(v: int) -> int:
    return bin(v).count("1")


def _g(x1: int, z1: int, x2: int, z2: int) -> int:
    # exponent of i picked up by sigma(x1,z1) * sigma(x2,z2)
    if x1 == 0 and z1 == 0:
        return 0
    if x1 == 1 and z1 == 1:
        return z2 - x2
    if x1 == 1:
        return z2 * (2 * x2 - 1)
    return x2 * (1 - 2 * z2)


@dataclass(frozen=True, order=True)
class PauliOp:
    """``i**phase`` times a tensor product of I/X/Y/Z on ``n`` qubits."""

    n: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"qubit count must be positive, got {self.n}")
        top = 1 << self.n
        if not (0 <= self.x < top and 0 <= self.z < top):
            raise ValueError(f"masks x={self.x}, z={self.z} do not fit {self.n} qubits")
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def identity(cls, n: int) -> PauliOp:
        return cls(n)

    @classmethod
    def from_label(cls, label: str) -> PauliOp:
        """Parse labels such as ``"XZ"``, ``"-Y"``, ``"+iIX"`` (qubit 0 first)."""
        phase = 0
        body = label.strip()
        for prefix, k in (("+i", 1), ("-i", 3), ("i", 1), ("+", 0), ("-", 2)):
            if body.startswith(prefix) and body[len(prefix):len(prefix) + 1] in set("IXYZ"):
                phase = k
                body = body[len(prefix):]
                break
        if not body or set(body) - set("IXYZ"):
            raise ValueError(f"bad Pauli label {label!r}")
        n = len(body)
        x = z = 0
        for q, ch in enumerate(body):
            bit = 1 << (n - 1 - q)
            if ch in "XY":
                x |= bit
            if ch in "ZY":
                z |= bit
        return cls(n, x, z, phase)

    @classmethod
    def single(cls, n: int, q: int, letter: str) -> PauliOp:
        """``letter`` on qubit ``q``, identity elsewhere."""
        return cls.from_label("".join(letter if i == q else "I" for i in range(n)))

    def qubit_letter(self, q: int) -> str:
        bit = self.n - 1 - q
        return _LETTERS[((self.x >> bit) & 1, (self.z >> bit) & 1)]

    @property
    def support(self) -> list[int]:
        mask = self.x | self.z
        return [q for q in range(self.n) if (mask >> (self.n - 1 - q)) & 1]

    @property
    def bare(self) -> PauliOp:
        return PauliOp(self.n, self.x, self.z, 0)

    @property
    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    @property
    def is_hermitian(self) -> bool:
        return self.phase in (0, 2)

    @property
    def coefficient(self) -> complex:
        return _PHASE_VALUE[self.phase]

    def __mul__(self, other: PauliOp) -> PauliOp:
        return pauli_mul(self, other)

    def __neg__(self) -> PauliOp:
        return PauliOp(self.n, self.x, self.z, self.phase + 2)

    def scaled(self, k: int) -> PauliOp:
        """Multiply by ``i**k``."""
        return PauliOp(self.n, self.x, self.z, self.phase + k)

    def commutes(self, other: PauliOp) -> bool:
        return (_popcount(self.x & other.z) + _popcount(self.z & other.x)) % 2 == 0

    def __str__(self) -> str:
        return _PHASE_LABEL[self.phase] + "".join(self.qubit_letter(q) for q in range(self.n))

    def __repr__(self) -> str:
        return f"PauliOp({self})"


def pauli_mul(a: PauliOp, b: PauliOp) -> PauliOp:
    """Exact product ``a @ b`` including the phase."""
    if a.n != b.n:
        raise ValueError(f"qubit count mismatch: {a.n} vs {b.n}")
    k = a.phase + b.phase
    for bit in range(a.n):
        k += _g((a.x >> bit) & 1, (a.z >> bit) & 1, (b.x >> bit) & 1, (b.z >> bit) & 1)
    return PauliOp(a.n, a.x ^ b.x, a.z ^ b.z, k)


def _column_data(p: PauliOp) -> tuple[np.ndarray, np.ndarray]:
    """Row index and value of the single nonzero in each column of ``p``."""
    cols = np.arange(1 << p.n)
    rows = cols ^ p.x
    base = _PHASE_VALUE[(p.phase + _popcount(p.x & p.z)) % 4]
    parity = np.array([_popcount(c & p.z) & 1 for c in cols])
    return rows, base * (1 - 2 * parity)


def materialize(p: PauliOp) -> np.ndarray:
    """Dense ``2**n x 2**n`` matrix of ``p``."""
    dim = 1 << p.n
    rows, vals = _column_data(p)
    out = np.zeros((dim, dim), dtype=complex)
    out[rows, np.arange(dim)] = vals
    return out


def trace_with_pauli(u: np.ndarray, p: PauliOp) -> complex:
    """``Tr(u @ P)`` in O(N) by walking the nonzero of each column of P."""
    dim = 1 << p.n
    if u.shape != (dim, dim):
        raise ValueError(f"matrix shape {u.shape} does not match {p.n}-qubit Pauli")
    rows, vals = _column_data(p)
    cols = np.arange(dim)
    # (U P)_{cc} = U[c, rows[c]] * P[rows[c], c]
    return complex(np.sum(u[cols, rows] * vals))


def enumerate_paulis(n: int, signed: bool = False) -> list[PauliOp]:
    """All bare (or +/- signed) Paulis in (x, z) lexicographic order.

    The identity comes first. With ``signed`` each bare Pauli is followed
    by its negation.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return list(_iter_paulis(n, signed))


def _iter_paulis(n: int, signed: bool) -> Iterator[PauliOp]:
    for x in range(1 << n):
        for z in range(1 << n):
            yield PauliOp(n, x, z)
            if signed:
                yield PauliOp(n, x, z, 2)


@functools.lru_cache(maxsize=None)
def pauli_index(n: int) -> dict[PauliOp, int]:
    """Canonical position of each bare Pauli."""
    return {p: i for i, p in enumerate(enumerate_paulis(n))}


@functools.lru_cache(maxsize=None)
def trace_matrix(n: int) -> np.ndarray:
    """K with ``u.reshape(-1) @ K == [Tr(u P) for P in enumerate_paulis(n)]``.

    Works on stacks too: ``us.reshape(B, -1) @ K``.
    """
    mats = [materialize(p).T.reshape(-1) for p in enumerate_paulis(n)]
    out = np.stack(mats, axis=1)
    out.setflags(write=False)
    return out


@functools.lru_cache(maxsize=None)
def pauli_stack(n: int) -> np.ndarray:
    """All bare Pauli matrices, shape (4**n, N, N), canonical order."""
    out = np.stack([materialize(p) for p in enumerate_paulis(n)])
    out.setflags(write=False)
    return out
