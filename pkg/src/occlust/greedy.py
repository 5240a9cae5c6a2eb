"""Online Greedy: each arrival starts a singleton, then positive-gain merges cascade."""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .clustering import Clustering
from .instance import LabeledInstance


class MergeOrder(str, enum.Enum):
    MAX_GAIN = "max_gain"
    FIRST_FOUND = "first_found"


@dataclass(frozen=True)
class GreedyPolicy:
    """Which positive-gain pair to merge next.

    ``max_gain`` takes the largest gain, ``first_found`` the first positive
    pair in id order; both break ties by the smallest (survivor, other) pair.
    """

    order: MergeOrder = MergeOrder.MAX_GAIN

    @classmethod
    def parse(cls, value: "GreedyPolicy | str | None") -> "GreedyPolicy":
        if value is None:
            return cls()
        if isinstance(value, GreedyPolicy):
            return value
        return cls(MergeOrder(value))


def _pick(c: Clustering, dirty: int, order: MergeOrder) -> tuple[int, int] | None:
    # Only pairs touching the newest cluster can have positive gain: before the
    # arrival (or the last merge) every other pair was already at gain <= 0.
    best_pair, best_gain = None, 0
    for other in c.cluster_ids():
        if other == dirty:
            continue
        g = c.gain(dirty, other)
        if g <= 0:
            continue
        pair = (dirty, other) if dirty < other else (other, dirty)
        if order is MergeOrder.FIRST_FOUND:
            if best_pair is None or pair < best_pair:
                best_pair = pair
        elif g > best_gain or (g == best_gain and pair < best_pair):
            best_pair, best_gain = pair, g
    return best_pair


def greedy_step(c: Clustering, policy: GreedyPolicy | None = None) -> Clustering:
    """Admit the next vertex of ``c.inst`` and merge until no pair has gain > 0.

    Mutates and returns ``c``.
    """
    order = GreedyPolicy.parse(policy).order
    dirty = c.arrive()
    while True:
        pair = _pick(c, dirty, order)
        if pair is None:
            return c
        dirty = c.merge(*pair)


def greedy_run(inst: LabeledInstance, policy: GreedyPolicy | str | None = None) -> list[Clustering]:
    """Clustering after every arrival's merge cascade, one entry per time step."""
    policy = GreedyPolicy.parse(policy)
    c = Clustering(inst)
    trace = []
    for _ in range(inst.n):
        greedy_step(c, policy)
        trace.append(c.copy())
    return trace


def greedy_final(inst: LabeledInstance, policy: GreedyPolicy | str | None = None) -> Clustering:
    policy = GreedyPolicy.parse(policy)
    c = Clustering(inst)
    for _ in range(inst.n):
        greedy_step(c, policy)
    return c


def max_pair_gain(c: Clustering) -> int | None:
    """Largest gain over all live pairs (None with fewer than two clusters)."""
    ids = c.cluster_ids()
    best = None
    for i, x in enumerate(ids):
        for y in ids[i + 1:]:
            g = c.gain(x, y)
            if best is None or g > best:
                best = g
    return best
