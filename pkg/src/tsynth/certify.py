"""Amplitude and conjugation tests: is a residual unitary within eps of a Clifford?

Both tests come in a single-matrix form that returns a report and a batched
form used by the search over stacks of residuals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .matrix import SLACK, num_qubits
from .pauli import PauliOp, enumerate_paulis, pauli_stack, trace_matrix

EPS_REGIME_MAX = 0.3249196962
EXACT_EPS = 1e-8


def check_epsilon_regime(eps: float) -> bool:
    """True when S_0 and S_1 are guaranteed separable, i.e. eps <= 0.3249196962."""
    if eps < 0:
        raise ValueError(f"epsilon must be non-negative, got {eps}")
    return eps <= EPS_REGIME_MAX


def effective_epsilon(eps: float) -> float:
    """Exact synthesis (eps = 0) runs with a tiny float tolerance instead."""
    return max(eps, EXACT_EPS)


@dataclass
class TestReport:
    __test__ = False  # not a pytest class

    m_support: int
    s1: list[tuple[PauliOp, float]]
    s0: list[tuple[PauliOp, float]]
    coeffs: np.ndarray = field(repr=False)
    epsilon_used: float = 0.0
    pass_amplitude: bool = True
    pass_conjugation: bool | None = None

    @property
    def passed(self) -> bool:
        return self.pass_amplitude and bool(self.pass_conjugation)


def amplitude_bounds(m: int, eps: float) -> tuple[float, float, float]:
    """(low, high) for S_1 entries and the S_0 ceiling at support size ``m``."""
    rad = math.sqrt(m * (2 * eps**2 - eps**4))
    return (1 - eps**2) / math.sqrt(m) - rad, 1 / math.sqrt(m) + rad, rad


def amplitude_batch(sorted_mags: np.ndarray, eps: float) -> np.ndarray:
    """Smallest accepted support size per row, 0 where none is accepted.

    ``sorted_mags`` has shape (B, K) with each row sorted descending.
    """
    b, k = sorted_mags.shape
    found = np.zeros(b, dtype=np.int64)
    top = sorted_mags[:, 0]
    for m in range(1, k + 1):
        lo, hi, s0_hi = amplitude_bounds(m, eps)
        ok = (sorted_mags[:, m - 1] >= lo - SLACK) & (top <= hi + SLACK)
        if m < k:
            ok &= sorted_mags[:, m] <= s0_hi + SLACK
        found = np.where((found == 0) & ok, m, found)
    return found


def amplitude_test(wp: np.ndarray, eps: float) -> TestReport | None:
    """Sort |Tr(W'P)/N| descending and find the first M whose intervals hold."""
    n = num_qubits(wp)
    eps = effective_epsilon(eps)
    coeffs = wp.reshape(-1) @ trace_matrix(n) / wp.shape[0]
    mags = np.abs(coeffs)
    order = np.argsort(-mags, kind="stable")
    m = int(amplitude_batch(mags[order][None, :], eps)[0])
    if m == 0:
        return None
    paulis = enumerate_paulis(n)
    ranked = [(paulis[i], float(mags[i])) for i in order]
    return TestReport(m, ranked[:m], ranked[m:], coeffs, eps)


def conjugation_spectra(ws: np.ndarray) -> np.ndarray:
    """|Pauli coefficients| of ``W P' W^dag`` for each P' != I.

    Input (B, N, N); output (B, 4**n - 1, 4**n).
    """
    b, dim, _ = ws.shape
    n = dim.bit_length() - 1
    paulis = pauli_stack(n)[1:]
    conj = np.einsum("bij,pjk,blk->bpil", ws, paulis, ws.conj(), optimize=True)
    coeffs = conj.reshape(b, len(paulis), dim * dim) @ trace_matrix(n)
    return np.abs(coeffs) / dim


def conjugation_bounds(eps: float, rule: str = "sound") -> tuple[float, float]:
    """(spike floor, ceiling for every other coefficient).

    ``"second_order"`` gives ``1 - 3 eps^2 + eps^4`` and ``2 eps^2 - eps^4``. Those
    drop the first-order cross terms ``conj(e_I) e_P`` of E P' E^dag: a
    z-rotation at distance eps from I already puts ~2.8 eps off the spike.
    ``"sound"`` uses the exact spike ``|e_I|^2 + sum(+-|e_P|^2) >=
    2 (1 - eps^2)^2 - 1`` and Parseval for the rest.
    """
    if rule == "second_order":
        return 1 - 3 * eps**2 + eps**4, 2 * eps**2 - eps**4
    if rule == "sound":
        spike = 2 * (1 - eps**2) ** 2 - 1
        return spike, math.sqrt(max(0.0, 1 - spike**2))
    raise ValueError(f"unknown bound rule {rule!r}")


def conjugation_batch(ws: np.ndarray, eps: float, rule: str = "sound") -> np.ndarray:
    """Per-residual verdict of the single-spike conjugation pattern."""
    mags = conjugation_spectra(ws)
    spike_lo, rest_hi = conjugation_bounds(eps, rule)
    spike_lo -= SLACK
    rest_hi += SLACK
    top2 = -np.partition(-mags, 1, axis=-1)[..., :2]
    ok = (top2[..., 0] >= spike_lo) & (top2[..., 0] <= 1 + SLACK) & (top2[..., 1] <= rest_hi)
    return ok.all(axis=-1)


def conjugation_test(wp: np.ndarray, eps: float, report: TestReport | None = None, rule: str = "sound") -> bool:
    """Every ``W' P' W'^dag`` must have one coefficient near 1 and the rest near 0."""
    eps = effective_epsilon(eps)
    verdict = bool(conjugation_batch(wp[None], eps, rule)[0])
    if report is not None:
        report.pass_conjugation = verdict
    return verdict


def certify(wp: np.ndarray, eps: float) -> TestReport | None:
    """Amplitude then conjugation; the report only when both pass."""
    report = amplitude_test(wp, eps)
    if report is None or not conjugation_test(wp, eps, report):
        return None
    return report
