"""Built-in target unitaries and the plain-text matrix file format.

Matrix file: a header line ``qubits <n>`` followed by N^2 lines
``row col re im`` in row-major order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .matrix import NotUnitaryError, UNITARY_ATOL, as_unitary, num_qubits, unitarity_deviation

QFT_MAX_QUBITS = 4
CONVENTIONS = ("swap", "noswap")


class MatrixFormatError(ValueError):
    pass


def crz(theta: float) -> np.ndarray:
    """Controlled z-rotation ``diag(1, 1, e^{-i theta/2}, e^{i theta/2})``."""
    return np.diag([1, 1, np.exp(-0.5j * theta), np.exp(0.5j * theta)]).astype(complex)


def givens(theta: float) -> np.ndarray:
    """Rotation by ``theta`` in the span of |01> and |10>."""
    c, s = math.cos(theta), math.sin(theta)
    g = np.eye(4, dtype=complex)
    g[1:3, 1:3] = [[c, -s], [s, c]]
    return g


def bit_reversal(n: int) -> np.ndarray:
    """Permutation matrix reversing the qubit order (the QFT's final swap layer)."""
    dim = 1 << n
    perm = np.zeros((dim, dim), dtype=complex)
    for j in range(dim):
        rev = int(format(j, f"0{n}b")[::-1], 2) if n else 0
        perm[rev, j] = 1
    return perm


def qft(n: int, convention: str = "swap") -> np.ndarray:
    """Quantum Fourier transform on n qubits.

    ``"swap"`` is the DFT matrix ``e^{2 pi i jk / N} / sqrt(N)``, i.e. the
    textbook circuit including its final swaps. ``"noswap"`` drops the swap
    layer, leaving the output qubits in reversed order.
    """
    if not 1 <= n <= QFT_MAX_QUBITS:
        raise ValueError(f"qft supports 1 <= n <= {QFT_MAX_QUBITS}, got n = {n}")
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    dim = 1 << n
    j = np.arange(dim)
    dft = np.exp(2j * np.pi * np.outer(j, j) / dim) / math.sqrt(dim)
    return dft if convention == "swap" else bit_reversal(n) @ dft


def theta_grid(start: int = 1, stop: int = 1000, step: int = 50) -> np.ndarray:
    """Angles ``2 pi k / 1000`` for k = 1, 51, ..., 951."""
    return 2 * np.pi * np.arange(start, stop + 1, step) / 1000


BUILTINS = {"crz": crz, "givens": givens, "qft": qft}


@dataclass(frozen=True)
class TargetSpec:
    description: str
    matrix: np.ndarray = field(repr=False)
    path: str | None = None

    @property
    def n(self) -> int:
        return num_qubits(self.matrix)

    @classmethod
    def builtin(cls, name: str, *, theta: float | None = None, n: int | None = None,
                convention: str = "swap") -> "TargetSpec":
        if name in ("crz", "givens"):
            if theta is None:
                raise ValueError(f"builtin {name!r} needs a theta")
            return cls(f"{name}(theta={theta!r})", BUILTINS[name](theta))
        if name == "qft":
            if n is None:
                raise ValueError("builtin 'qft' needs n")
            return cls(f"qft(n={n}, convention={convention})", qft(n, convention))
        raise ValueError(f"unknown builtin {name!r}; choose from {sorted(BUILTINS)}")


def parse_matrix(text: str, source: str = "<string>") -> np.ndarray:
    """Parse the matrix file format; dimension and index checks only."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 2 or lines[0][0] != "qubits":
        raise MatrixFormatError(f"{source}: first line must be 'qubits <n>'")
    try:
        n = int(lines[0][1])
    except ValueError:
        raise MatrixFormatError(f"{source}: bad qubit count {lines[0][1]!r}") from None
    if n < 1:
        raise MatrixFormatError(f"{source}: qubit count must be >= 1, got {n}")
    dim = 1 << n
    body = lines[1:]
    if len(body) != dim * dim:
        raise MatrixFormatError(f"{source}: expected {dim * dim} entries for {n} qubits, got {len(body)}")
    u = np.zeros((dim, dim), dtype=complex)
    for lineno, parts in enumerate(body, start=2):
        if len(parts) != 4:
            raise MatrixFormatError(f"{source}:{lineno}: expected 'row col re im'")
        try:
            r, c = int(parts[0]), int(parts[1])
            re, im = float(parts[2]), float(parts[3])
        except ValueError:
            raise MatrixFormatError(f"{source}:{lineno}: cannot parse {' '.join(parts)!r}") from None
        expect = divmod(lineno - 2, dim)
        if (r, c) != expect:
            raise MatrixFormatError(f"{source}:{lineno}: entry ({r}, {c}) out of row-major order, expected {expect}")
        u[r, c] = complex(re, im)
    return u


def load_matrix(path: str | Path, atol: float = UNITARY_ATOL) -> TargetSpec:
    """Read a matrix file and check unitarity."""
    path = Path(path)
    u = parse_matrix(path.read_text(), str(path))
    dev = unitarity_deviation(u)
    if dev > atol:
        raise NotUnitaryError(dev, atol)
    return TargetSpec(f"matrix({path.name})", as_unitary(u, atol), str(path))


def format_matrix(u: np.ndarray) -> str:
    n = num_qubits(u)
    lines = [f"qubits {n}"]
    for (r, c), v in np.ndenumerate(u):
        lines.append(f"{r} {c} {v.real:.17g} {v.imag:.17g}")
    return "\n".join(lines) + "\n"


def save_matrix(path: str | Path, u: np.ndarray) -> None:
    Path(path).write_text(format_matrix(u))
