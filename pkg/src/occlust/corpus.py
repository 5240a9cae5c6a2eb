"""Seeded instance corpora shared by the verify suites and the test-suite."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instance import (EdgeSign, LabeledInstance, gen_all_positive, gen_planted, gen_random,
                       gen_two_clique, gen_yao_gadget)


@dataclass(frozen=True)
class Item:
    label: str
    inst: LabeledInstance


def random_corpus(count: int = 300, max_n: int = 9, seed: int = 0) -> list[Item]:
    """``count`` random instances, 2 <= n <= max_n, with varying positive density."""
    out = []
    for i in range(count):
        rng = np.random.default_rng([seed, i])
        n = int(rng.integers(2, max_n + 1))
        p = float(rng.uniform(0.1, 0.9))
        sub = int(rng.integers(0, 2**63 - 1))
        out.append(Item(f"random n={n} p={p:.3f} seed={seed}/{i}", gen_random(n, p, sub)))
    return out


def generator_corpus(max_n: int = 12) -> list[Item]:
    """Every named generator at every size with n <= max_n (planted: two seeds, two noise levels)."""
    out = []
    for m in range(1, max_n // 2 + 1):
        out.append(Item(f"all-positive m={m}", gen_all_positive(m)))
    for m in range(1, max_n // 6 + 1):
        for rr in (EdgeSign.NEGATIVE, EdgeSign.POSITIVE):
            out.append(Item(f"yao m={m} rr={rr.name.lower()}", gen_yao_gadget(m, rr)))
    for m in range(2, max_n // 2 + 1):
        for k in range(1, m):
            out.append(Item(f"two-clique m={m} k={k}", gen_two_clique(m, k)))
    for clusters in range(1, max_n + 1):
        for size in range(1, max_n // clusters + 1):
            if clusters * size < 2:
                continue
            for flip in (0.0, 0.1):
                for seed in (0, 1):
                    out.append(Item(f"planted c={clusters} s={size} flip={flip} seed={seed}",
                                    gen_planted(clusters, size, flip, seed)))
    return out


def dense_corpus(count: int = 50, seed: int = 0, max_n: int = 12) -> list[tuple[Item, float]]:
    """Streams for the Dense checks, paired with the tau to run them at (1.1 / 1.5 alternating)."""
    shapes = [(c, s) for c in range(1, 5) for s in range(2, 7) if 4 <= c * s <= max_n]
    out = []
    for i in range(count):
        tau = 1.1 if i % 2 == 0 else 1.5
        rng = np.random.default_rng([seed, 7919, i])
        sub = int(rng.integers(0, 2**63 - 1))
        kind = i % 5
        if kind <= 2:
            c, s = shapes[int(rng.integers(len(shapes)))]
            item = Item(f"planted c={c} s={s} flip=0 seed={sub}", gen_planted(c, s, 0.0, sub))
        elif kind == 3:
            c, s = shapes[int(rng.integers(len(shapes)))]
            item = Item(f"planted c={c} s={s} flip=0.05 seed={sub}", gen_planted(c, s, 0.05, sub))
        else:
            n = int(rng.integers(6, max_n + 1))
            item = Item(f"random n={n} p=0.85 seed={sub}", gen_random(n, 0.85, sub))
        out.append((item, tau))
    return out
