"""Independent oracles for the tests.

Nothing here calls the package's kernels: partitions are generated by plain
recursion and optima come from a subset dynamic program.
"""
import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from occlust.instance import LabeledInstance

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def all_partitions(items):
    """Every set partition of ``items`` (a list), as lists of lists."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for smaller in all_partitions(rest):
        for i in range(len(smaller)):
            yield smaller[:i] + [[first] + smaller[i]] + smaller[i + 1:]
        yield [[first]] + smaller


def brute_score(inst, blocks, horizon=None):
    """(profit, cost) by looping over every pair."""
    horizon = sum(len(b) for b in blocks) if horizon is None else horizon
    where = {v: i for i, b in enumerate(blocks) for v in b}
    profit = 0
    for i in range(horizon):
        for j in range(i):
            together = where[i] == where[j]
            if together == inst.is_positive(i, j):
                profit += 1
    return profit, horizon * (horizon - 1) // 2 - profit


def dp_optimum(inst, t=None):
    """Maximum agreements of the first t vertices via a DP over vertex subsets."""
    n = inst.n if t is None else t
    s = np.asarray(inst.sign_matrix[:n, :n], dtype=int)
    weight = [0] * (1 << n)
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << low)
        weight[mask] = weight[rest] + sum(int(s[low, u]) for u in range(n) if rest >> u & 1)
    best = [0] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        rest = mask ^ low
        top = None
        sub = rest
        while True:
            val = weight[sub | low] + best[rest ^ sub]
            if top is None or val > top:
                top = val
            if sub == 0:
                break
            sub = (sub - 1) & rest
        best[mask] = top
    negatives = int(np.count_nonzero(s[np.tril_indices(n, -1)] < 0))
    return negatives + best[(1 << n) - 1]


def bell_by_stirling(t):
    """B(t) as the sum of Stirling numbers of the second kind."""
    stirling = [[0] * (t + 1) for _ in range(t + 1)]
    stirling[0][0] = 1
    for i in range(1, t + 1):
        for k in range(1, i + 1):
            stirling[i][k] = k * stirling[i - 1][k] + stirling[i - 1][k - 1]
    return sum(stirling[t])


@st.composite
def instances(draw, min_n=1, max_n=8):
    n = draw(st.integers(min_n, max_n))
    bits = draw(st.lists(st.booleans(), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    return LabeledInstance(n, bits)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
