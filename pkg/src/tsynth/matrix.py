"""Dense unitary helpers, the global-phase-invariant distance and Pauli spectra.

Unitaries are plain complex ``numpy`` arrays of shape ``(2**n, 2**n)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pauli import PauliOp, enumerate_paulis, trace_matrix

UNITARY_ATOL = 1e-10
SLACK = 1e-9


class NotUnitaryError(ValueError):
    def __init__(self, deviation: float, atol: float):
        super().__init__(f"matrix is not unitary: max |U^dag U - I| = {deviation:.3g} > {atol:.3g}")
        self.deviation = deviation


def num_qubits(u: np.ndarray) -> int:
    """Qubit count of a square matrix whose side is a power of two."""
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {u.shape}")
    dim = u.shape[0]
    n = dim.bit_length() - 1
    if dim < 2 or (1 << n) != dim:
        raise ValueError(f"dimension {dim} is not a power of two >= 2")
    return n


def unitarity_deviation(u: np.ndarray) -> float:
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def as_unitary(u, atol: float = UNITARY_ATOL) -> np.ndarray:
    """Coerce to a complex array and check ``U^dag U = I`` to ``atol``."""
    arr = np.asarray(u, dtype=complex)
    num_qubits(arr)
    dev = unitarity_deviation(arr)
    if dev > atol:
        raise NotUnitaryError(dev, atol)
    return arr


def _same_shape(u: np.ndarray, w: np.ndarray) -> None:
    if u.shape != w.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {w.shape}")


def mat_mul(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    _same_shape(u, v)
    return u @ v


def adjoint(u: np.ndarray) -> np.ndarray:
    return u.conj().T


def tensor(*mats: np.ndarray) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def distance(u: np.ndarray, w: np.ndarray) -> float:
    """Global-phase-invariant distance ``sqrt(1 - |Tr(U^dag W)| / N)``."""
    _same_shape(u, w)
    t = np.vdot(u, w)
    if abs(t) == 0:
        return 1.0
    # ||U - c W||_F^2 = 2N - 2|Tr(U^dag W)| for the best unit c; avoids the
    # cancellation in 1 - |Tr|/N when the distance is tiny
    diff = u - (t.conjugate() / abs(t)) * w
    d = float(np.linalg.norm(diff)) / math.sqrt(2 * u.shape[0])
    return min(1.0, d)


def pauli_coefficients(u: np.ndarray) -> np.ndarray:
    """``Tr(U P) / N`` for every bare P in canonical order."""
    n = num_qubits(u)
    return u.reshape(-1) @ trace_matrix(n) / u.shape[0]


def separation_radius(m: int, eps: float) -> float:
    """``sqrt(M (2 eps^2 - eps^4))``, the width of the amplitude intervals."""
    return math.sqrt(m * (2 * eps**2 - eps**4))


@dataclass(frozen=True)
class PauliSpectrum:
    """Pauli-basis expansion of a unitary.

    ``coeffs[i]`` belongs to ``paulis[i]`` (canonical order). ``m_support``
    counts coefficients above the noise floor for the tolerance used;
    ``r_value`` is their common modulus when the spectrum is flat
    (``clifford_like``), else ``None``.
    """

    n: int
    paulis: tuple[PauliOp, ...]
    coeffs: np.ndarray
    m_support: int
    r_value: float | None

    @property
    def clifford_like(self) -> bool:
        return self.r_value is not None

    def __getitem__(self, p: PauliOp) -> complex:
        return complex(self.coeffs[self.paulis.index(p.bare)]) * p.coefficient.conjugate()

    def as_dict(self) -> dict[PauliOp, complex]:
        return {p: complex(c) for p, c in zip(self.paulis, self.coeffs)}

    def support(self) -> list[PauliOp]:
        order = np.argsort(-np.abs(self.coeffs), kind="stable")
        return [self.paulis[i] for i in order[: self.m_support]]


def pauli_spectrum(u: np.ndarray, eps: float = 0.0, norm_tol: float = 1e-8) -> PauliSpectrum:
    """Expand ``u`` in the Pauli basis and classify its support.

    A coefficient counts as nonzero when its modulus exceeds
    ``sqrt(M (2 eps^2 - eps^4)) + 1e-9``; M is the smallest support size
    consistent with that rule.
    """
    n = num_qubits(u)
    coeffs = pauli_coefficients(u)
    mags = np.abs(coeffs)
    total = float(np.sum(mags**2))
    if abs(total - 1.0) > norm_tol:
        raise NotUnitaryError(abs(total - 1.0), norm_tol)

    ordered = np.sort(mags)[::-1]
    m_support = len(ordered)
    for m in range(1, len(ordered) + 1):
        floor = separation_radius(m, eps) + SLACK
        if int(np.sum(ordered > floor)) == m:
            m_support = m
            break

    top = ordered[:m_support]
    r_value = None
    spread_tol = 2 * separation_radius(m_support, eps) + 1e-8
    if top.max() - top.min() <= spread_tol and abs(m_support * float(np.mean(top)) ** 2 - 1) <= 1e-8 + 4 * spread_tol:
        r_value = float(np.mean(top))
    return PauliSpectrum(n, tuple(enumerate_paulis(n)), coeffs, m_support, r_value)


def from_spectrum(spec: PauliSpectrum) -> np.ndarray:
    """Rebuild ``sum_P q_P P``."""
    from .pauli import pauli_stack

    return np.tensordot(spec.coeffs, pauli_stack(spec.n), axes=1)


def canonical_phase(u: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Scale ``u`` so its first nonzero entry (row-major) is real positive."""
    flat = u.reshape(-1)
    idx = np.flatnonzero(np.abs(flat) > tol)
    if idx.size == 0:
        raise ValueError("zero matrix has no canonical phase")
    lead = flat[idx[0]]
    return u * (abs(lead) / lead)
