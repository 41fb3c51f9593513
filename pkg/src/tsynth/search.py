"""Exhaustive optimal search over generator words.

``decide`` answers "is there a certified word of length m"; ``min_resource``
runs it for m = 0, 1, 2, ... and returns the first certified synthesis.

Words are visited in lexicographic order of their index sequences
``(g_1, ..., g_m)`` with adjacent entries distinct; the candidate product is
``G[g_1] @ ... @ G[g_m]`` and the residual is ``W^dag @ product``. Prefix
products are expanded depth-first in blocks so each new word costs one
batched multiply; the last letter is folded into a precomputed trace
matrix so a whole block of words is scored with a single GEMM.
"""

from __future__ import annotations

import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .certify import (
    amplitude_batch,
    amplitude_test,
    check_epsilon_regime,
    conjugation_batch,
    effective_epsilon,
)
from .generators import VN_MAX_QUBITS, Generator, generator_set
from .matrix import as_unitary, num_qubits
from .pauli import trace_matrix
from .reconstruct import ReconstructionError, SynthesisResult, assemble

log = logging.getLogger(__name__)

DEFAULT_M_MAX = 8
DEFAULT_BLOCK = 1 << 21  # trace entries scored per GEMM


class BudgetExceeded(RuntimeError):
    def __init__(self, m_max: int):
        super().__init__(f"no certified decomposition with at most {m_max} generators; "
                         "epsilon may be too small for this budget")
        self.m_max = m_max


class EpsilonRegimeError(ValueError):
    pass


@dataclass
class SearchConfig:
    mode: str = "count"
    epsilon: float = 1e-4
    m_max: int = DEFAULT_M_MAX
    threads: int = 1
    generators: Sequence[Generator] | None = None
    block: int = DEFAULT_BLOCK
    # "certified": amplitude, conjugation, reconstruction and d(U', W) <= eps.
    # "amplitude": accept on the amplitude test alone. Diagnostic only; the
    # returned word need not be within eps of the target.
    acceptance: str = "certified"

    def __post_init__(self):
        if self.mode not in ("count", "depth"):
            raise ValueError(f"mode must be 'count' or 'depth', got {self.mode!r}")
        if self.acceptance not in ("certified", "amplitude"):
            raise ValueError(f"acceptance must be 'certified' or 'amplitude', got {self.acceptance!r}")
        if not check_epsilon_regime(self.epsilon):
            raise EpsilonRegimeError(
                f"epsilon={self.epsilon} exceeds 0.3249196962; the amplitude test cannot separate supports"
            )
        if self.m_max < 0:
            raise ValueError(f"m_max must be >= 0, got {self.m_max}")
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")

    @property
    def eps(self) -> float:
        return effective_epsilon(self.epsilon)

    def generators_for(self, n: int) -> Sequence[Generator]:
        if self.generators is not None:
            return self.generators
        if self.mode == "depth" and n > VN_MAX_QUBITS:
            raise ValueError(f"depth mode supports n <= {VN_MAX_QUBITS}, got n = {n}")
        return generator_set(n, self.mode)


@dataclass
class SearchStats:
    visited: int = 0
    amplitude_passed: int = 0
    conjugation_passed: int = 0
    reconstruction_failed: int = 0
    per_level: dict[int, int] = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def add(self, **counts: int) -> None:
        with self._lock:
            for k, v in counts.items():
                setattr(self, k, getattr(self, k) + v)


def count_words(num_generators: int, m: int) -> int:
    """Adjacent-distinct words of length m: ``|S| (|S| - 1)^(m - 1)``."""
    if m == 0:
        return 1
    return num_generators * (num_generators - 1) ** (m - 1)


def iter_words(num_generators: int, m: int) -> Iterator[tuple[int, ...]]:
    """Reference enumeration of adjacent-distinct words in lexicographic order."""
    if m == 0:
        yield ()
        return
    for head in iter_words(num_generators, m - 1):
        for g in range(num_generators):
            if not head or head[-1] != g:
                yield head + (g,)


class _Level:
    """Precomputed data for scoring the last letter of a word."""

    def __init__(self, w: np.ndarray, gens: Sequence[Generator]):
        self.dim = w.shape[0]
        self.n = num_qubits(w)
        self.w_dag = w.conj().T
        self.mats = np.stack([g.matrix for g in gens])
        k = trace_matrix(self.n)  # (N^2, 4^n)
        s = len(gens)
        # Tr(X G_g P) = vec(X) . vec((G_g P)^T): fold each G_g into the trace matrix
        kg = np.einsum("gcj,rjp->rcgp", self.mats, k.reshape(self.dim, self.dim, -1))
        self.kg = np.ascontiguousarray(kg.reshape(self.dim * self.dim, s * k.shape[1]))
        self.num_gens = s
        self.num_paulis = k.shape[1]


def _expand(idx: np.ndarray, prods: np.ndarray, mats: np.ndarray, block: int) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Append one letter to every prefix, keeping lexicographic order, in blocks."""
    s = mats.shape[0]
    step = max(1, block // max(1, s - 1))
    for start in range(0, len(idx), step):
        sub_idx, sub = idx[start:start + step], prods[start:start + step]
        nxt = np.einsum("bij,gjk->bgik", sub, mats, optimize=True)
        keep = np.ones((len(sub_idx), s), dtype=bool)
        if sub_idx.shape[1]:
            keep[np.arange(len(sub_idx)), sub_idx[:, -1]] = False
        rows, cols = np.nonzero(keep)
        new_idx = np.concatenate([sub_idx[rows], cols[:, None]], axis=1)
        yield new_idx, nxt[rows, cols]


def _prefix_blocks(idx, prods, mats, depth: int, block: int) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    if depth == 0:
        yield idx, prods
        return
    for sub_idx, sub in _expand(idx, prods, mats, block):
        yield from _prefix_blocks(sub_idx, sub, mats, depth - 1, block)


def _score_block(level: _Level, idx: np.ndarray, prods: np.ndarray, eps: float, stats: SearchStats,
                 conjugation: bool = True):
    """Yield (word, residual) of amplitude- and conjugation-passing words in order."""
    b = len(idx)
    s, k = level.num_gens, level.num_paulis
    traces = (prods.reshape(b, -1) @ level.kg).reshape(b, s, k)
    mags = np.abs(traces) / level.dim
    mags = -np.sort(-mags, axis=-1)
    valid = np.ones((b, s), dtype=bool)
    if idx.shape[1]:
        valid[np.arange(b), idx[:, -1]] = False
    stats.add(visited=int(valid.sum()))
    ms = amplitude_batch(mags.reshape(b * s, k), eps).reshape(b, s)
    rows, cols = np.nonzero((ms > 0) & valid)
    if rows.size == 0:
        return
    stats.add(amplitude_passed=int(rows.size))
    residuals = prods[rows] @ level.mats[cols]
    ok = conjugation_batch(residuals, eps) if conjugation else np.ones(len(rows), dtype=bool)
    stats.add(conjugation_passed=int(ok.sum()))
    for r, c, res in zip(rows[ok], cols[ok], residuals[ok]):
        yield tuple(int(v) for v in idx[r]) + (int(c),), res


def _search_head(w, gens, level, eps, cfg, head, m, stats, stop_after):
    """Words of length m >= 2 that start with ``head``; first success wins."""
    start_idx = np.array([[head]], dtype=np.int64)
    start = (level.w_dag @ level.mats[head])[None]
    block = max(1, cfg.block // (level.num_gens * level.num_paulis))
    for idx, prods in _prefix_blocks(start_idx, start, level.mats, m - 2, block):
        if stop_after() < head:
            return None
        for word, res in _score_block(level, idx, prods, eps, stats, cfg.acceptance == "certified"):
            result = _try(w, gens, word, res, cfg, eps, stats)
            if result is not None:
                return result
    return None


def decide(w: np.ndarray, m: int, cfg: SearchConfig, stats: SearchStats | None = None) -> SynthesisResult | None:
    """Lexicographically smallest certified word of length ``m``, or None."""
    if m < 1:
        raise ValueError("decide needs m >= 1; use clifford_check for m = 0")
    w = as_unitary(w)
    n = num_qubits(w)
    gens = cfg.generators_for(n)
    stats = stats if stats is not None else SearchStats()
    level = _Level(w, gens)
    eps = cfg.eps
    before = stats.visited

    if m == 1:
        # one pass over all single letters; the head split is pointless here
        idx = np.zeros((1, 0), dtype=np.int64)
        result = None
        for word, res in _score_block(level, idx, level.w_dag[None], eps, stats, cfg.acceptance == "certified"):
            result = _try(w, gens, word, res, cfg, eps, stats)
            if result is not None:
                break
        stats.per_level[m] = stats.visited - before
        return result

    best = [len(gens)]
    lock = threading.Lock()

    def stop_after():
        return best[0]

    def run(head):
        if stop_after() < head:
            return None
        found = _search_head(w, gens, level, eps, cfg, head, m, stats, stop_after)
        if found is not None:
            with lock:
                best[0] = min(best[0], head)
        return found

    heads = range(len(gens))
    if cfg.threads == 1:
        result = None
        for head in heads:
            result = run(head)
            if result is not None:
                break
    else:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(run, heads))
        hits = [r for r in results if r is not None]
        result = min(hits, key=lambda r: r.generator_indices) if hits else None
    stats.per_level[m] = stats.visited - before
    return result


def _try(w, gens, word, res, cfg, eps, stats) -> SynthesisResult | None:
    report = amplitude_test(res, eps)
    if report is None:
        return None
    strict = cfg.acceptance == "certified"
    report.pass_conjugation = True if strict else None
    try:
        return assemble(w, [gens[i] for i in word], res, report, cfg.mode, eps, strict=strict)
    except ReconstructionError as exc:
        stats.add(reconstruction_failed=1)
        log.debug("word %s rejected: %s", word, exc)
        return None


def clifford_check(w: np.ndarray, cfg: SearchConfig, stats: SearchStats | None = None) -> SynthesisResult | None:
    """The m = 0 level: is W itself within eps of a Clifford?"""
    w = as_unitary(w)
    stats = stats if stats is not None else SearchStats()
    wd = w.conj().T
    stats.add(visited=1)
    stats.per_level[0] = 1
    ms = amplitude_batch(-np.sort(-np.abs(wd.reshape(1, -1) @ trace_matrix(num_qubits(w))) / w.shape[0]), cfg.eps)
    if ms[0] == 0 or (cfg.acceptance == "certified" and not conjugation_batch(wd[None], cfg.eps)[0]):
        return None
    return _try(w, (), (), wd, cfg, cfg.eps, stats)


def min_resource(w: np.ndarray, cfg: SearchConfig, stats: SearchStats | None = None) -> SynthesisResult:
    """Smallest m with a certified word, searched upward from m = 0.

    m is the eps-T-count in count mode and the eps-T-depth in depth mode.
    Raises ``BudgetExceeded`` past ``cfg.m_max``.
    """
    stats = stats if stats is not None else SearchStats()
    t0 = time.perf_counter()
    result = clifford_check(w, cfg, stats)
    m = 0
    while result is None:
        m += 1
        if m > cfg.m_max:
            raise BudgetExceeded(cfg.m_max)
        log.info("searching m=%d (%d words)", m, count_words(len(cfg.generators_for(num_qubits(w))), m))
        result = decide(w, m, cfg, stats)
    result.candidates_visited = stats.visited
    log.info("m=%d after %.2fs, %d words", result.m, time.perf_counter() - t0, stats.visited)
    return result
