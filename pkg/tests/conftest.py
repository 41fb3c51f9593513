import math
import os
import sys

import numpy as np
import pytest
from hypothesis import settings

from tsynth.circuit import random_clifford_circuit
from tsynth.matrix import distance

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def pytest_collection_modifyitems(config, items):
    if os.environ.get("TSYNTH_NIGHTLY") == "1":
        return
    skip = pytest.mark.skip(reason="nightly; set TSYNTH_NIGHTLY=1")
    for item in items:
        if "nightly" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.RESULTS:
        terminalreporter.write_line(line)


def random_unitary(n, rng):
    dim = 1 << n
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_clifford(n, rng):
    return random_clifford_circuit(n, rng).unitary()


def _expm_hermitian(h, t):
    vals, vecs = np.linalg.eigh(h)
    return (vecs * np.exp(1j * t * vals)) @ vecs.conj().T


def near_identity(n, eps, rng, exact=False):
    """Random E = exp(itH) with d(E, I) <= eps (== eps when ``exact``)."""
    dim = 1 << n
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    h = (a + a.conj().T) / 2
    ident = np.eye(dim)
    lo, hi = 0.0, 1.0
    while distance(_expm_hermitian(h, hi), ident) < eps:
        hi *= 2
    for _ in range(80):
        mid = (lo + hi) / 2
        if distance(_expm_hermitian(h, mid), ident) <= eps:
            lo = mid
        else:
            hi = mid
    t = lo if exact else lo * rng.uniform(0, 1)
    return _expm_hermitian(h, t)


def rz(delta):
    return np.diag([np.exp(-0.5j * delta), np.exp(0.5j * delta)])


def rz_at_distance(eps):
    """Single-qubit z-rotation with d(R, I) = eps exactly."""
    return rz(2 * math.acos(1 - eps**2))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def clifford_mask(us):
    """Exact Clifford check by dense conjugation; independent of the search's tests."""
    from tsynth.pauli import enumerate_paulis, materialize

    n = us.shape[-1].bit_length() - 1
    ps = np.stack([materialize(p) for p in enumerate_paulis(n)])
    conj = np.einsum("bij,pjk,blk->bpil", us, ps[1:], us.conj())
    coeffs = np.abs(np.einsum("bpij,qji->bpq", conj, ps)) / (1 << n)
    return np.all(np.abs(coeffs.max(axis=-1) - 1) < 1e-8, axis=-1)


def brute_force_minimum(w, mats, k_max):
    """Smallest k <= k_max with an adjacent-distinct word G_1..G_k such that W^dag G_1..G_k is Clifford."""
    import itertools

    w_dag = w.conj().T
    for k in range(k_max + 1):
        words = [wd for wd in itertools.product(range(len(mats)), repeat=k)
                 if all(a != b for a, b in zip(wd, wd[1:]))]
        prods = []
        for wd in words:
            u = w_dag
            for g in wd:
                u = u @ mats[g]
            prods.append(u)
        if clifford_mask(np.stack(prods)).any():
            return k
    return None
