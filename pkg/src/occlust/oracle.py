"""Offline clusterings: exact set-partition search and a local-search surrogate."""
from __future__ import annotations

import enum
import time
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernels
from .clustering import Clustering
from .instance import LabeledInstance

DEFAULT_EXACT_CAP = 12
HARD_EXACT_CAP = 12


class CapacityError(RuntimeError):
    """The exact enumerator was asked for a prefix beyond its cap."""


class OraclePolicy(str, enum.Enum):
    EXACT_ONLY = "exact_only"
    EXACT_THEN_HEURISTIC = "exact_then_heuristic"
    HEURISTIC_ONLY = "heuristic_only"


@dataclass
class OracleResult:
    clustering: Clustering
    profit: int
    exact: bool
    elapsed: float
    method: str = "exact"
    visited: int | None = None
    extra: dict = field(default_factory=dict)

    @property
    def cost(self) -> int:
        t = self.clustering.horizon
        return t * (t - 1) // 2 - self.profit


@lru_cache(maxsize=512)
def _exact_cached(inst: LabeledInstance, t: int) -> tuple[tuple[int, ...], int, int]:
    rgs, profit, visited = _kernels.enumerate_best(inst.prefix_signs(t))
    return tuple(rgs), int(profit), int(visited)


def exact_optimum(inst: LabeledInstance, t: int | None = None,
                  exact_cap: int = DEFAULT_EXACT_CAP) -> OracleResult:
    """Maximum-agreement partition of the first ``t`` arrivals, by enumeration.

    Among maximizers the lexicographically smallest restricted-growth string wins.
    """
    t = inst.n if t is None else t
    if not 0 <= t <= inst.n:
        raise ValueError(f"prefix length {t} outside [0, {inst.n}]")
    if t > exact_cap:
        raise CapacityError(f"exact search capped at t={exact_cap}, asked for t={t}")
    if exact_cap > HARD_EXACT_CAP and t > HARD_EXACT_CAP:
        warnings.warn(f"exact enumeration at t={t} visits Bell({t}) partitions", stacklevel=2)
    start = time.perf_counter()
    rgs, profit, visited = _exact_cached(inst, t)
    clustering = Clustering.from_labels(inst, rgs)
    return OracleResult(clustering, profit, True, time.perf_counter() - start,
                        method="exact", visited=visited)


def agglomerate(signs: np.ndarray) -> list[int]:
    """Offline greedy agglomeration from singletons: merge the best pair while gain > 0."""
    s = np.asarray(signs, dtype=np.int64)
    t = s.shape[0]
    labels = list(range(t))
    if t == 0:
        return labels
    weight = s.copy()  # weight[x, y]: signed cut weight between live clusters x, y
    alive = list(range(t))
    while len(alive) > 1:
        sub = weight[np.ix_(alive, alive)]
        iu = np.triu_indices(len(alive), 1)
        vals = sub[iu]
        best = int(np.argmax(vals))
        if vals[best] <= 0:
            break
        x, y = alive[iu[0][best]], alive[iu[1][best]]
        weight[x, :] += weight[y, :]
        weight[:, x] += weight[:, y]
        weight[x, x] = 0
        alive.remove(y)
        labels = [x if lab == y else lab for lab in labels]
    return _kernels.canonical(labels)


def _random_start(rng: np.random.Generator, t: int) -> list[int]:
    k = int(rng.integers(1, t + 1))
    return rng.integers(0, k, size=t).tolist()


def local_search_optimum(inst: LabeledInstance, t: int | None = None, restarts: int = 8,
                         seed: int = 0) -> OracleResult:
    """Best of one agglomerative start and ``restarts`` seeded random starts.

    Each start is descended with best-improvement vertex moves and cluster
    merges.  Start ``i`` depends only on ``(seed, i)``, so more restarts can
    only help.
    """
    t = inst.n if t is None else t
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    start_time = time.perf_counter()
    signs = inst.prefix_signs(t)
    if t == 0:
        return OracleResult(Clustering(inst), 0, False, 0.0, method="local_search")
    starts = [agglomerate(signs)]
    for i in range(restarts):
        starts.append(_random_start(np.random.default_rng([seed, i]), t))
    best_labels, best_profit, best_idx = None, -1, -1
    neg = (signs < 0)
    tri = np.tril_indices(t, -1)
    for idx, init in enumerate(starts):
        labels = np.asarray(_kernels.local_search(signs, init))
        together = labels[tri[0]] == labels[tri[1]]
        profit = int(np.count_nonzero(together != neg[tri]))
        if profit > best_profit:
            best_labels, best_profit, best_idx = labels, profit, idx
    clustering = Clustering.from_labels(inst, best_labels.tolist())
    return OracleResult(clustering, best_profit, False, time.perf_counter() - start_time,
                        method="local_search", extra={"restarts": restarts, "seed": seed,
                                                      "best_start": best_idx})


def oracle(inst: LabeledInstance, t: int | None = None,
           policy: OraclePolicy | str = OraclePolicy.EXACT_THEN_HEURISTIC,
           exact_cap: int = DEFAULT_EXACT_CAP, restarts: int = 8, seed: int = 0) -> OracleResult:
    t = inst.n if t is None else t
    policy = OraclePolicy(policy)
    if policy is OraclePolicy.HEURISTIC_ONLY:
        return local_search_optimum(inst, t, restarts, seed)
    if policy is OraclePolicy.EXACT_ONLY or t <= exact_cap:
        return exact_optimum(inst, t, exact_cap)
    return local_search_optimum(inst, t, restarts, seed)
