"""Error budgets for unitaries assembled from separately approximated blocks.

If each block ``V_i`` is approximated by ``U_i`` with ``d(U_i, V_i) <= eps_i``,
these functions bound (or, for ``compose_sequence``, estimate) the distance
of the composite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

RULES = ("tensor", "mult2", "sequence")


def _check(eps: Sequence[float]) -> list[float]:
    vals = [float(e) for e in eps]
    for e in vals:
        if not 0 <= e < 1:
            raise ValueError(f"block epsilon must lie in [0, 1), got {e}")
    return vals


def compose_tensor(eps: Sequence[float]) -> float:
    """Bound for ``U_1 (x) U_2 (x) ...``: ``sqrt(1 - prod(1 - eps_i^2))``."""
    vals = _check(eps)
    # 1 - prod(1 - e^2) without cancellation for tiny e
    return math.sqrt(max(0.0, -math.expm1(sum(math.log1p(-e * e) for e in vals))))


def compose_mult2(eps1: float, eps2: float) -> float:
    """Bound for the product ``U_2 U_1`` of two approximated factors."""
    a, b = _check([eps1, eps2])
    sq = a * a + b * b - a * a * b * b + 2 * a * b * math.sqrt((1 - a * a / 2) * (1 - b * b / 2))
    return min(1.0, math.sqrt(sq))


def compose_sequence(eps: Sequence[float]) -> float:
    """Running estimate for a long product of approximated factors.

    ``eps^2 ~ sum eps_i^2 + 2 sum_{i>=2} eps_i S_i sqrt(max(0, 1 - eps_i^2 - S_i^2))``
    with ``S_i = eps_1 + ... + eps_{i-1}``, clamped to [0, 1]. This is an
    estimate, not a proven bound; ``compose_mult2`` is the rigorous version
    for two factors.
    """
    vals = _check(eps)
    total = 0.0
    prefix = 0.0
    for i, e in enumerate(vals):
        total += e * e
        if i:
            total += 2 * e * prefix * math.sqrt(max(0.0, 1 - e * e - prefix * prefix))
        prefix += e
    return min(1.0, math.sqrt(max(0.0, total)))


def qft_budget(n: int, eps_r: float) -> tuple[int, float]:
    """Blocks and composed error when each of the n(n-1)/2 controlled rotations costs ``eps_r``."""
    if n < 2:
        raise ValueError(f"qft_budget needs n >= 2, got {n}")
    n_r = n * (n - 1) // 2
    return n_r, compose_sequence([eps_r] * n_r)


@dataclass
class ErrorBudget:
    block_epsilons: list[float]
    rule: str = "sequence"
    composed_epsilon: float = field(init=False)

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"rule must be one of {RULES}, got {self.rule!r}")
        self.block_epsilons = _check(self.block_epsilons)
        if self.rule == "tensor":
            self.composed_epsilon = compose_tensor(self.block_epsilons)
        elif self.rule == "mult2":
            if len(self.block_epsilons) != 2:
                raise ValueError("the mult2 rule takes exactly two block epsilons")
            self.composed_epsilon = compose_mult2(*self.block_epsilons)
        else:
            self.composed_epsilon = compose_sequence(self.block_epsilons)
