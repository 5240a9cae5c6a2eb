"""Merge-only clustering of an arrived prefix, with incremental scoring.

A cluster's id is its smallest vertex, so ids never change except when a
merge retires the larger of the two.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .instance import LabeledInstance


@dataclass(frozen=True)
class Score:
    profit: int
    cost: int

    @property
    def edges(self) -> int:
        return self.profit + self.cost


class ClusteringError(ValueError):
    pass


def _pairs(t: int) -> int:
    return t * (t - 1) // 2


class Clustering:
    """Partition of ``range(horizon)`` that only ever grows by arrivals and merges.

    ``profit`` is maintained incrementally; :func:`score` recomputes it from
    scratch and is what the tests compare against.
    """

    def __init__(self, inst: LabeledInstance):
        self.inst = inst
        self.horizon = 0
        self.assignment: list[int] = []
        self.clusters: dict[int, list[int]] = {}
        # _pos[x][y] == |positive edges between clusters x and y|, kept symmetric
        self._pos: dict[int, dict[int, int]] = {}
        self.profit = 0

    # -- construction ------------------------------------------------------

    @classmethod
    def from_blocks(cls, inst: LabeledInstance, blocks: Iterable[Iterable[int]],
                    horizon: int | None = None) -> "Clustering":
        blocks = [sorted(int(v) for v in b) for b in blocks]
        blocks = [b for b in blocks if b]
        if horizon is None:
            horizon = sum(len(b) for b in blocks)
        seen = sorted(v for b in blocks for v in b)
        if seen != list(range(horizon)):
            raise ClusteringError(f"blocks do not partition range({horizon})")
        c = cls(inst)
        for _ in range(horizon):
            c.arrive()
        for b in blocks:
            head = b[0]
            for v in b[1:]:
                head = c.merge(c.assignment[head], c.assignment[v])
        return c

    @classmethod
    def from_labels(cls, inst: LabeledInstance, labels: Sequence[int]) -> "Clustering":
        groups: dict[int, list[int]] = {}
        for v, lab in enumerate(labels):
            groups.setdefault(int(lab), []).append(v)
        return cls.from_blocks(inst, groups.values(), horizon=len(labels))

    def copy(self) -> "Clustering":
        c = Clustering.__new__(Clustering)
        c.inst = self.inst
        c.horizon = self.horizon
        c.assignment = list(self.assignment)
        c.clusters = {k: list(v) for k, v in self.clusters.items()}
        c._pos = {k: dict(v) for k, v in self._pos.items()}
        c.profit = self.profit
        return c

    # -- dynamics ------------------------------------------------------------

    def arrive(self) -> int:
        """Add the next vertex of the instance as a singleton; returns its cluster id."""
        v = self.horizon
        if v >= self.inst.n:
            raise ClusteringError(f"instance has only {self.inst.n} vertices")
        row = self.inst.row(v)
        counts: dict[int, int] = {}
        for u in np.flatnonzero(row).tolist():
            cid = self.assignment[u]
            counts[cid] = counts.get(cid, 0) + 1
        new_row: dict[int, int] = {}
        for cid in self.clusters:
            k = counts.get(cid, 0)
            new_row[cid] = k
            self._pos[cid][v] = k
        self._pos[v] = new_row
        self.clusters[v] = [v]
        self.assignment.append(v)
        self.horizon += 1
        # every edge to the past is cut, so only its negative ones agree
        self.profit += v - int(row.sum())
        return v

    def _check_pair(self, x: int, y: int) -> None:
        if x == y:
            raise ClusteringError(f"cannot merge cluster {x} with itself")
        if x not in self.clusters or y not in self.clusters:
            raise ClusteringError(f"unknown cluster id in ({x}, {y})")

    def inter_positive(self, x: int, y: int) -> int:
        self._check_pair(x, y)
        return self._pos[x][y]

    def gain(self, x: int, y: int) -> int:
        """Profit change of merging x and y: 2|pos(x, y)| - |x||y|."""
        self._check_pair(x, y)
        return 2 * self._pos[x][y] - len(self.clusters[x]) * len(self.clusters[y])

    def merge(self, x: int, y: int) -> int:
        """Merge two live clusters; the smaller id survives and is returned."""
        delta = self.gain(x, y)
        keep, drop = (x, y) if x < y else (y, x)
        dropped = self.clusters.pop(drop)
        for v in dropped:
            self.assignment[v] = keep
        members = self.clusters[keep]
        members.extend(dropped)
        members.sort()
        row_keep = self._pos[keep]
        row_drop = self._pos.pop(drop)
        del row_keep[drop]
        for z, k in row_drop.items():
            if z == keep:
                continue
            row_keep[z] += k
            zrow = self._pos[z]
            zrow[keep] += k
            del zrow[drop]
        self.profit += delta
        return keep

    # -- views ------------------------------------------------------------

    @property
    def cost(self) -> int:
        return _pairs(self.horizon) - self.profit

    def cluster_ids(self) -> list[int]:
        return sorted(self.clusters)

    def cluster_of(self, v: int) -> int:
        return self.assignment[v]

    def blocks(self) -> list[tuple[int, ...]]:
        """Clusters as sorted tuples, ordered by smallest vertex."""
        return [tuple(self.clusters[c]) for c in sorted(self.clusters)]

    def labels(self) -> list[int]:
        return list(self.assignment)

    def score(self) -> Score:
        return score(self)

    def serialize(self) -> str:
        return "".join(" ".join(map(str, b)) + "\n" for b in self.blocks())

    def check_cache(self) -> bool:
        """Recount every cached inter-cluster positive count from scratch."""
        ids = self.cluster_ids()
        mat = self.inst.prefix_signs(self.horizon) > 0
        for i, x in enumerate(ids):
            for y in ids[i + 1:]:
                true = int(mat[np.ix_(self.clusters[x], self.clusters[y])].sum())
                if self._pos[x][y] != true or self._pos[y][x] != true:
                    return False
        return set(self._pos) == set(ids)

    def __len__(self) -> int:
        return len(self.clusters)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Clustering):
            return NotImplemented
        return self.horizon == other.horizon and self.blocks() == other.blocks()

    def __repr__(self) -> str:
        return f"Clustering(horizon={self.horizon}, blocks={self.blocks()})"


def score_blocks(inst: LabeledInstance, blocks: Iterable[Iterable[int]], horizon: int) -> Score:
    """From-scratch agreements/disagreements of a partition of ``range(horizon)``."""
    label = np.full(horizon, -1, dtype=np.int64)
    for b, block in enumerate(blocks):
        label[list(block)] = b
    if (label < 0).any():
        raise ClusteringError("blocks do not cover the horizon")
    rows, cols = np.tril_indices(horizon, -1)
    positive = inst.positive[: _pairs(horizon)]
    together = label[rows] == label[cols]
    profit = int(np.count_nonzero(positive == together))
    return Score(profit, _pairs(horizon) - profit)


def score(c: Clustering, inst: LabeledInstance | None = None) -> Score:
    inst = c.inst if inst is None else inst
    if c.horizon > inst.n:
        raise ClusteringError("clustering extends past the instance")
    return score_blocks(inst, c.clusters.values(), c.horizon)


def as_blocks(c: "Clustering | Iterable[Iterable[int]]") -> list[frozenset[int]]:
    if isinstance(c, Clustering):
        return [frozenset(b) for b in c.clusters.values()]
    return [frozenset(b) for b in c]


def coarsens(later, earlier) -> bool:
    """True iff every cluster of ``earlier`` sits inside one cluster of ``later``."""
    where: dict[int, int] = {}
    for idx, block in enumerate(as_blocks(later)):
        for v in block:
            where[v] = idx
    for block in as_blocks(earlier):
        homes = {where.get(v, -1) for v in block}
        if len(homes) != 1 or -1 in homes:
            return False
    return True


def same_partition(a, b) -> bool:
    return sorted(sorted(x) for x in as_blocks(a)) == sorted(sorted(x) for x in as_blocks(b))
