import numpy as np
import pytest

from conftest import dp_optimum
from occlust.clustering import score, score_blocks
from occlust.corpus import random_corpus
from occlust.instance import LabeledInstance, gen_all_positive, gen_planted, gen_random, gen_two_clique
from occlust.oracle import (CapacityError, agglomerate, exact_optimum, local_search_optimum,
                            oracle)


def test_all_positive_triangle():
    res = exact_optimum(LabeledInstance(3, [True, True, True]))
    assert res.profit == 3 and res.exact
    assert res.clustering.blocks() == [(0, 1, 2)]


def test_triangle_with_one_negative():
    # ab+, ac+, bc- with a=0, b=1, c=2
    res = exact_optimum(LabeledInstance(3, [True, True, False]))
    assert (res.profit, res.cost) == (2, 1)


def test_two_clique_optimum_is_the_two_cliques():
    res = exact_optimum(gen_two_clique(3, 1))
    assert res.cost == 1
    assert res.visited == 203
    assert res.clustering.blocks() == [(0, 2, 3), (1, 4, 5)]


def test_result_profit_matches_its_clustering():
    for seed in range(20):
        inst = gen_random(8, 0.5, seed)
        res = exact_optimum(inst)
        assert res.profit == score(res.clustering).profit == dp_optimum(inst)


def test_prefix():
    inst = gen_two_clique(4, 1)
    res = exact_optimum(inst, 5)
    assert res.clustering.horizon == 5
    assert res.profit == dp_optimum(inst, 5)


def test_capacity():
    with pytest.raises(CapacityError):
        exact_optimum(gen_random(13, 0.5, 0))
    with pytest.raises(CapacityError):
        exact_optimum(gen_random(8, 0.5, 0), exact_cap=6)


def test_local_search_all_positive():
    for seed in range(5):
        res = local_search_optimum(gen_all_positive(5), restarts=3, seed=seed)
        assert res.profit == 45 and not res.exact


def test_local_search_noiseless_planted():
    inst = gen_planted(2, 5, 0.0, seed=4)
    res = local_search_optimum(inst, restarts=4, seed=1)
    assert res.profit == exact_optimum(inst).profit == 45


def test_more_restarts_never_hurt():
    for seed in range(20):
        inst = gen_random(11, 0.5, 300 + seed)
        one = local_search_optimum(inst, restarts=1, seed=seed).profit
        five = local_search_optimum(inst, restarts=5, seed=seed).profit
        assert five >= one


def test_local_search_deterministic():
    inst = gen_random(20, 0.4, 9)
    a = local_search_optimum(inst, restarts=3, seed=2)
    b = local_search_optimum(inst, restarts=3, seed=2)
    assert a.clustering == b.clustering and a.profit == b.profit


def test_agglomerate_has_no_positive_pair():
    inst = gen_random(12, 0.6, 4)
    labels = agglomerate(inst.sign_matrix)
    s = inst.sign_matrix.astype(int)
    k = max(labels) + 1
    for x in range(k):
        for y in range(x + 1, k):
            cut = sum(s[u, v] for u in range(12) for v in range(12) if labels[u] == x and labels[v] == y)
            assert cut <= 0


def test_dispatch():
    small, big = gen_random(5, 0.5, 0), gen_random(40, 0.5, 0)
    assert oracle(small, 5, "exact_then_heuristic").exact
    res = oracle(big, 40, "exact_then_heuristic", restarts=2)
    assert not res.exact and res.method == "local_search"
    with pytest.raises(CapacityError):
        oracle(big, 40, "exact_only")
    assert not oracle(small, 5, "heuristic_only").exact


def test_arrival_order_invariance():
    rng = np.random.default_rng(1)
    for i in range(25):
        inst = gen_random(int(rng.integers(2, 10)), float(rng.random()), 40 + i)
        order = rng.permutation(inst.n).tolist()
        permuted = inst.permute(order)
        a, b = exact_optimum(inst), exact_optimum(permuted)
        assert a.profit == b.profit
        # the optimum of the original, relabeled, is optimal for the permuted order
        where = {old: new for new, old in enumerate(order)}
        moved = [[where[v] for v in blk] for blk in a.clustering.blocks()]
        assert score_blocks(permuted, moved, inst.n).profit == b.profit


def test_local_search_vs_exact_rate():
    corpus = random_corpus(300, 9, seed=0)
    equal = 0
    for item in corpus:
        exact = exact_optimum(item.inst).profit
        heur = local_search_optimum(item.inst, restarts=8, seed=0).profit
        assert heur <= exact
        equal += heur == exact
    print(f"local search matched exact on {equal}/300")
    assert equal >= 285
