"""Labeled complete graphs in arrival order, generators and the .occ format.

Vertices are 0-based: vertex ``v`` is the ``(v + 1)``-th arrival, so the
prefix of the first ``t`` arrivals is ``range(t)``.  Labels live in a flat
lower-triangular array: the edge ``(i, j)`` with ``j < i`` sits at offset
``i * (i - 1) // 2 + j``.
"""
from __future__ import annotations

import enum
import hashlib
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class EdgeSign(enum.IntEnum):
    POSITIVE = 1
    NEGATIVE = -1

    @classmethod
    def parse(cls, value: "str | EdgeSign") -> "EdgeSign":
        if isinstance(value, EdgeSign):
            return value
        key = str(value).strip().lower()
        if key in ("+", "positive", "pos", "1", "+1"):
            return cls.POSITIVE
        if key in ("-", "negative", "neg", "-1"):
            return cls.NEGATIVE
        raise ValueError(f"unknown edge sign {value!r}")


class InstanceFormatError(ValueError):
    """Raised when .occ text cannot be parsed; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def tri_index(i: int, j: int) -> int:
    if j > i:
        i, j = j, i
    if i == j:
        raise ValueError("no self-loops in a labeled instance")
    return i * (i - 1) // 2 + j


class LabeledInstance:
    """Immutable complete graph on ``n`` vertices with +/- labels.

    ``positive`` is a boolean array of length n(n-1)/2 in triangular order.
    """

    def __init__(self, n: int, positive: "np.ndarray | Sequence[bool]"):
        n = int(n)
        if n < 1:
            raise ValueError("an instance needs at least one vertex")
        arr = np.array(positive, dtype=bool).ravel()
        if arr.size != n * (n - 1) // 2:
            raise ValueError(f"expected {n * (n - 1) // 2} labels for n={n}, got {arr.size}")
        arr.setflags(write=False)
        self.n = n
        self._positive = arr

    @property
    def positive(self) -> np.ndarray:
        return self._positive

    @property
    def num_edges(self) -> int:
        return self.n * (self.n - 1) // 2

    def is_positive(self, i: int, j: int) -> bool:
        return bool(self._positive[tri_index(i, j)])

    def sign(self, i: int, j: int) -> EdgeSign:
        return EdgeSign.POSITIVE if self.is_positive(i, j) else EdgeSign.NEGATIVE

    def row(self, i: int) -> np.ndarray:
        """Positive flags for the edges from ``i`` back to ``0..i-1``."""
        start = i * (i - 1) // 2
        return self._positive[start:start + i]

    @cached_property
    def sign_matrix(self) -> np.ndarray:
        """Symmetric int8 matrix of +1/-1 with a zero diagonal."""
        n = self.n
        mat = np.zeros((n, n), dtype=np.int8)
        rows, cols = np.tril_indices(n, -1)
        # np.tril_indices walks row-major, matching the triangular layout
        vals = np.where(self._positive, 1, -1).astype(np.int8)
        mat[rows, cols] = vals
        mat[cols, rows] = vals
        mat.setflags(write=False)
        return mat

    def prefix_signs(self, t: int) -> np.ndarray:
        return self.sign_matrix[:t, :t]

    def count_positive(self) -> int:
        return int(self._positive.sum())

    def prefix(self, t: int) -> "LabeledInstance":
        if not 1 <= t <= self.n:
            raise ValueError(f"prefix length {t} outside [1, {self.n}]")
        return LabeledInstance(t, self._positive[: t * (t - 1) // 2])

    def permute(self, order: Sequence[int]) -> "LabeledInstance":
        """Re-order arrivals: the new k-th arrival is old vertex ``order[k]``."""
        order = [int(v) for v in order]
        if sorted(order) != list(range(self.n)):
            raise ValueError("order must be a permutation of range(n)")
        mat = self.sign_matrix[np.ix_(order, order)]
        rows, cols = np.tril_indices(self.n, -1)
        return LabeledInstance(self.n, mat[rows, cols] > 0)

    def digest(self) -> str:
        return hashlib.sha256(write_instance(self)).hexdigest()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabeledInstance):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._positive, other._positive)

    def __hash__(self) -> int:
        return hash((self.n, self._positive.tobytes()))

    def __repr__(self) -> str:
        return f"LabeledInstance(n={self.n}, positive={self.count_positive()}/{self.num_edges})"


def from_sign_matrix(mat: np.ndarray) -> LabeledInstance:
    mat = np.asarray(mat)
    n = mat.shape[0]
    rows, cols = np.tril_indices(n, -1)
    return LabeledInstance(n, mat[rows, cols] > 0)


def from_partition(n: int, blocks: Iterable[Iterable[int]]) -> LabeledInstance:
    """Noiseless instance whose positive edges are exactly the intra-block pairs."""
    label = np.full(n, -1, dtype=np.int64)
    for b, block in enumerate(blocks):
        for v in block:
            label[v] = b
    if (label < 0).any():
        raise ValueError("blocks must cover range(n)")
    rows, cols = np.tril_indices(n, -1)
    return LabeledInstance(n, label[rows] == label[cols])


# -- generators -----------------------------------------------------------


def gen_all_positive(m: int) -> LabeledInstance:
    """The all-positive graph on 2m vertices."""
    if m < 1:
        raise ValueError("m must be >= 1")
    n = 2 * m
    return LabeledInstance(n, np.ones(n * (n - 1) // 2, dtype=bool))


def yao_groups(m: int) -> list[tuple[list[int], list[int]]]:
    """(left, right) vertex lists for the three groups, in arrival order."""
    out = []
    for g in range(3):
        base = 2 * m * g
        out.append((list(range(base, base + m)), list(range(base + m, base + 2 * m))))
    return out


def gen_yao_gadget(m: int, right_right_sign: "EdgeSign | str" = EdgeSign.NEGATIVE) -> LabeledInstance:
    """Three groups of 2m vertices; the first group is indistinguishable from
    ``gen_all_positive(m)``.

    Within each group the first m arrivals are the left side, the next m the
    right side.  Cross-group labels: left-left positive, left-right negative,
    right-right ``right_right_sign``.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    rr = EdgeSign.parse(right_right_sign) == EdgeSign.POSITIVE
    n = 6 * m
    group = np.arange(n) // (2 * m)
    is_left = (np.arange(n) % (2 * m)) < m
    rows, cols = np.tril_indices(n, -1)
    same = group[rows] == group[cols]
    left_left = is_left[rows] & is_left[cols]
    right_right = ~is_left[rows] & ~is_left[cols]
    positive = same | left_left | (right_right & rr)
    return LabeledInstance(n, positive)


def gen_two_clique(m: int, k: int) -> LabeledInstance:
    """Two positive m-cliques A and B; a in A is positive to b_1..b_k only.

    Arrival order: a, b_1..b_k, a_2..a_m, b_{k+1}..b_m.
    """
    if m < 2 or not 1 <= k <= m - 1:
        raise ValueError("need 1 <= k <= m - 1")
    n = 2 * m
    in_a = np.zeros(n, dtype=bool)
    in_a[0] = True
    in_a[k + 1: k + m] = True
    rows, cols = np.tril_indices(n, -1)
    positive = in_a[rows] == in_a[cols]
    # cols < rows, so vertex 0 (a) only ever appears as the column
    special = (cols == 0) & (rows >= 1) & (rows <= k)
    return LabeledInstance(n, positive | special)


def two_clique_sides(m: int, k: int) -> tuple[list[int], list[int]]:
    a_side = [0] + list(range(k + 1, k + m))
    b_side = list(range(1, k + 1)) + list(range(k + m, 2 * m))
    return a_side, b_side


def gen_planted(clusters: int, size: int, flip_prob: float, seed: int) -> LabeledInstance:
    """Planted partition with independent label noise and a shuffled arrival order."""
    if clusters < 1 or size < 1:
        raise ValueError("clusters and size must be >= 1")
    if not 0.0 <= flip_prob <= 1.0:
        raise ValueError("flip_prob must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    n = clusters * size
    truth = np.repeat(np.arange(clusters), size)
    truth = truth[rng.permutation(n)]
    rows, cols = np.tril_indices(n, -1)
    positive = truth[rows] == truth[cols]
    flips = rng.random(rows.size) < flip_prob
    return LabeledInstance(n, positive ^ flips)


def planted_truth(clusters: int, size: int, seed: int) -> list[list[int]]:
    """Ground-truth blocks of ``gen_planted`` for the same seed (noise-independent)."""
    rng = np.random.default_rng(seed)
    n = clusters * size
    truth = np.repeat(np.arange(clusters), size)[rng.permutation(n)]
    return [sorted(np.flatnonzero(truth == c).tolist()) for c in range(clusters)]


def gen_random(n: int, p_positive: float, seed: int) -> LabeledInstance:
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    return LabeledInstance(n, rng.random(n * (n - 1) // 2) < p_positive)


# -- .occ text format -------------------------------------------------------


def write_instance(inst: LabeledInstance) -> bytes:
    lines = [str(inst.n)]
    for i in range(1, inst.n):
        lines.append("".join("+" if p else "-" for p in inst.row(i)))
    return ("\n".join(lines) + "\n").encode("ascii")


def read_instance(data: "bytes | str") -> LabeledInstance:
    if isinstance(data, bytes):
        try:
            text = data.decode("ascii")
        except UnicodeDecodeError as exc:
            raise InstanceFormatError(1, "non-ASCII content") from exc
    else:
        text = data
    if not text.endswith("\n"):
        raise InstanceFormatError(text.count("\n") + 1, "missing trailing newline")
    lines = text[:-1].split("\n")
    head = lines[0]
    if not head.isdigit() or head != str(int(head)):
        raise InstanceFormatError(1, f"expected a decimal vertex count, got {head!r}")
    n = int(head)
    if n < 1:
        raise InstanceFormatError(1, "vertex count must be positive")
    if len(lines) != n:
        raise InstanceFormatError(min(len(lines), n) + 1,
                                  f"expected {n - 1} label lines for n={n}, found {len(lines) - 1}")
    positive = np.empty(n * (n - 1) // 2, dtype=bool)
    for i in range(1, n):
        line = lines[i]
        lineno = i + 1
        if len(line) != i:
            raise InstanceFormatError(lineno, f"expected {i} characters, got {len(line)}")
        for ch in line:
            if ch not in "+-":
                raise InstanceFormatError(lineno, f"illegal character {ch!r}")
        start = i * (i - 1) // 2
        positive[start:start + i] = [ch == "+" for ch in line]
    return LabeledInstance(n, positive)


def load_instance(path) -> LabeledInstance:
    with open(path, "rb") as fh:
        return read_instance(fh.read())


def save_instance(inst: LabeledInstance, path) -> None:
    with open(path, "wb") as fh:
        fh.write(write_instance(inst))
