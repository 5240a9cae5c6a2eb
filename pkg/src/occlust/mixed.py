"""Randomized mix: one seeded coin picks Dense (prob p) or Greedy for the whole run."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .clustering import Clustering
from .dense import DenseConfig, OracleFn, dense_run
from .greedy import GreedyPolicy, greedy_run
from .instance import LabeledInstance


def _check(alpha: float, eta: float) -> None:
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if not 0 < eta < 0.5:
        raise ValueError("eta must lie in (0, 1/2)")


def recommended_p(alpha: float, eta: float) -> float:
    """Probability of running Dense: alpha / (2 + 2 eta (2 - alpha))."""
    _check(alpha, eta)
    return alpha / (2 + 2 * eta * (2 - alpha))


def mixed_ratio_bound(alpha: float, eta: float) -> float:
    """Competitive ratio guaranteed by the mix at ``recommended_p``."""
    _check(alpha, eta)
    return 0.5 + (alpha * eta / 2) / (1 + 2 * eta * (1 - alpha / 2))


@dataclass(frozen=True)
class MixedConfig:
    p: float
    dense: DenseConfig
    greedy: GreedyPolicy = field(default_factory=GreedyPolicy)
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")


def choose_branch(p: float, seed: int) -> str:
    rng = np.random.default_rng(seed)
    return "dense" if rng.random() < p else "greedy"


def mixed_run(inst: LabeledInstance, config: MixedConfig,
              oracle_fn: OracleFn | None = None) -> tuple[str, list[Clustering]]:
    branch = choose_branch(config.p, config.seed)
    if branch == "dense":
        return branch, dense_run(inst, config.dense, oracle_fn).trace
    return branch, greedy_run(inst, config.greedy)
