"""Pure-Python kernels; same contract as the compiled ``_core`` module."""
from __future__ import annotations

import numpy as np


def enumerate_best(signs):
    """Exhaustive search over restricted-growth strings of ``range(t)``.

    ``signs`` is a symmetric +1/-1 matrix.  Returns ``(rgs, profit, visited)``:
    the lexicographically smallest maximizing string, its agreement count and
    the number of complete partitions visited (the Bell number of t).
    """
    s = np.asarray(signs, dtype=np.int64)
    t = s.shape[0]
    if t == 0:
        return [], 0, 1
    rows = [s[v, :v].tolist() for v in range(t)]
    neg = [sum(1 for x in r if x < 0) for r in rows]
    rgs = [0] * t
    best = [-1, None]
    visited = 0

    def dfs(v, nblocks, profit):
        nonlocal visited
        if v == t:
            visited += 1
            if profit > best[0]:
                best[0] = profit
                best[1] = list(rgs)
            return
        sums = [0] * (nblocks + 1)
        row = rows[v]
        for u in range(v):
            sums[rgs[u]] += row[u]
        base = profit + neg[v]
        for b in range(nblocks):
            rgs[v] = b
            dfs(v + 1, nblocks, base + sums[b])
        rgs[v] = nblocks
        dfs(v + 1, nblocks + 1, base)

    rgs[0] = 0
    dfs(1, 1, 0)
    return best[1], best[0], visited


def canonical(labels):
    """Relabel so cluster ids appear in first-occurrence order (an RGS)."""
    mapping = {}
    out = []
    for lab in labels:
        if lab not in mapping:
            mapping[lab] = len(mapping)
        out.append(mapping[lab])
    return out


def best_move(s, labels):
    """Best strictly improving move, or None.

    Relocations (kind 0) of vertex v to cluster c, where c == k means a fresh
    singleton, and merges (kind 1) of clusters x < y.  Ties prefer kind 0,
    then the smallest (v, c) or (x, y).
    """
    t = len(labels)
    k = max(labels) + 1
    onehot = np.zeros((t, k), dtype=np.int64)
    onehot[np.arange(t), labels] = 1
    affinity = s @ onehot  # affinity[v, c] = sum of signs from v into cluster c
    sizes = onehot.sum(axis=0)
    best = None  # (delta, kind, a, b)
    for v in range(t):
        own = labels[v]
        leave = affinity[v, own]
        for c in range(k + 1):
            if c == own:
                continue
            if c == k:
                if sizes[own] == 1:
                    continue
                delta = -leave
            else:
                delta = affinity[v, c] - leave
            if delta > 0 and (best is None or delta > best[0]):
                best = (int(delta), 0, v, c)
    between = onehot.T @ affinity  # between[x, y] = signed weight of the cut x|y
    for x in range(k):
        for y in range(x + 1, k):
            delta = between[x, y]
            if delta > 0 and (best is None or delta > best[0]):
                best = (int(delta), 1, x, y)
    return best


def local_search(signs, labels):
    """Best-improvement descent from ``labels``; returns a canonical local optimum."""
    s = np.asarray(signs, dtype=np.int64)
    labels = canonical(list(labels))
    if len(labels) == 0:
        return labels
    while True:
        move = best_move(s, labels)
        if move is None:
            return labels
        _, kind, a, b = move
        if kind == 0:
            labels[a] = b
        else:
            labels = [a if lab == b else lab for lab in labels]
        labels = canonical(labels)
