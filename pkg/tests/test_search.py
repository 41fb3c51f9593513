import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsynth.certify import amplitude_test
from tsynth.generators import build_vn, tcount_generators
from tsynth.matrix import distance
from tsynth.search import (
    BudgetExceeded,
    EpsilonRegimeError,
    SearchConfig,
    SearchStats,
    count_words,
    decide,
    iter_words,
    min_resource,
)
from tsynth.targets import crz, qft

from conftest import brute_force_minimum, random_clifford, random_unitary

T = np.diag([1, np.exp(1j * math.pi / 4)])
seeds = st.integers(0, 2**32 - 1)


def test_decide_examples():
    cfg = SearchConfig(epsilon=1e-4)
    res = decide(T, 1, cfg)
    assert res.generator_indices == (0,) and res.labels == ["R(+Z)"]
    assert decide(T.conj().T, 1, cfg) is not None
    only_x = SearchConfig(epsilon=1e-4, generators=[tcount_generators(1)[1]])
    assert decide(T, 1, only_x) is None
    with pytest.raises(ValueError):
        decide(T, 0, cfg)


def test_min_resource_examples(rng):
    cfg = SearchConfig(epsilon=1e-4)
    assert min_resource(random_clifford(2, rng), cfg).m == 0
    res = min_resource(T, cfg)
    assert res.m == 1 and res.circuit.gates == [("T", 0)]


def test_qft2():
    res = min_resource(qft(2), SearchConfig(epsilon=1e-3))
    assert res.m == 3
    assert res.circuit.t_count == 3
    assert distance(res.circuit.unitary(), qft(2)) <= 1e-3


def test_word_enumeration():
    words = list(iter_words(3, 3))
    assert len(words) == count_words(3, 3) == 12
    assert words == sorted(words)
    assert all(a != b for w in words for a, b in zip(w, w[1:]))
    assert count_words(15, 0) == 1 and list(iter_words(4, 0)) == [()]


@pytest.mark.parametrize("m", [1, 2, 3])
def test_visits_every_word(m, rng):
    w = random_unitary(2, rng)
    stats = SearchStats()
    assert decide(w, m, SearchConfig(epsilon=1e-4), stats) is None
    assert stats.per_level[m] == count_words(15, m)


def test_block_size_does_not_change_result(rng):
    c = random_clifford(2, rng)
    gens = tcount_generators(2)
    w = c @ gens[4].matrix @ gens[9].matrix
    base = min_resource(w, SearchConfig(epsilon=1e-8))
    tiny = min_resource(w, SearchConfig(epsilon=1e-8, block=64))
    assert base.generator_indices == tiny.generator_indices


def test_returns_lexicographically_first():
    # with the amplitude test alone many words pass; the first in order must win
    w = crz(2 * math.pi * 351 / 1000)
    cfg = SearchConfig(epsilon=1e-2, acceptance="amplitude")
    res = decide(w, 4, cfg)
    first = next(word for word in iter_words(15, 4)
                 if amplitude_test(w.conj().T @ np.linalg.multi_dot([tcount_generators(2)[g].matrix for g in word]), 1e-2))
    assert res.generator_indices == first


def test_thread_determinism(rng):
    gens = tcount_generators(2)
    w = random_clifford(2, rng) @ gens[2].matrix @ gens[7].matrix @ gens[2].matrix
    one = min_resource(w, SearchConfig(epsilon=1e-8, threads=1))
    four = min_resource(w, SearchConfig(epsilon=1e-8, threads=4))
    assert one.m == four.m and one.generator_indices == four.generator_indices


@settings(max_examples=15)
@given(st.integers(1, 2), st.integers(1, 3), seeds)
def test_planted_words_are_optimal(n, k, seed):
    rng = np.random.default_rng(seed)
    gens = tcount_generators(n)
    word = [int(rng.integers(len(gens)))]
    while len(word) < k:
        g = int(rng.integers(len(gens)))
        if g != word[-1]:
            word.append(g)
    w = random_clifford(n, rng)
    for g in word:
        w = w @ gens[g].matrix
    res = min_resource(w, SearchConfig(epsilon=1e-8))
    assert res.m <= k
    assert res.m == brute_force_minimum(w, [g.matrix for g in gens], k)
    assert res.circuit.t_count == res.m
    assert distance(res.circuit.unitary(), w) <= 1e-8


def test_depth_mode():
    assert min_resource(T, SearchConfig(mode="depth", epsilon=1e-4)).m == 1
    with pytest.raises(ValueError):
        min_resource(qft(3), SearchConfig(mode="depth", epsilon=1e-3))


@settings(max_examples=10)
@given(st.integers(1, 2), seeds)
def test_depth_planted(d, seed):
    rng = np.random.default_rng(seed)
    v1 = build_vn(1)
    w = random_clifford(1, rng)
    for _ in range(d):
        w = w @ v1[int(rng.integers(len(v1)))].matrix
    res = min_resource(w, SearchConfig(mode="depth", epsilon=1e-8))
    assert res.m <= d
    assert res.circuit.t_depth == res.m


def test_config_errors():
    with pytest.raises(EpsilonRegimeError):
        SearchConfig(epsilon=0.5)
    with pytest.raises(ValueError):
        SearchConfig(mode="width")
    with pytest.raises(ValueError):
        SearchConfig(threads=0)
    with pytest.raises(ValueError):
        SearchConfig(acceptance="loose")


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded) as err:
        min_resource(crz(0.3), SearchConfig(epsilon=1e-2, m_max=2))
    assert err.value.m_max == 2


def test_amplitude_acceptance_is_looser():
    w = crz(2 * math.pi * 301 / 1000)
    loose = min_resource(w, SearchConfig(epsilon=1e-2, acceptance="amplitude"))
    assert loose.m == 3
    assert not loose.achieved_distance <= 1e-2
    with pytest.raises(BudgetExceeded):
        min_resource(w, SearchConfig(epsilon=1e-2, m_max=3))


def test_three_qubit_planted_word(rng):
    gens = tcount_generators(3)
    assert len(gens) == 63
    w = random_clifford(3, rng) @ gens[41].matrix @ gens[6].matrix
    res = min_resource(w, SearchConfig(epsilon=1e-6, m_max=2))
    assert res.m == 2
    assert distance(res.circuit.unitary(), w) <= 1e-6
