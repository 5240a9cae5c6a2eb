import math

import pytest
from hypothesis import given, strategies as st

from conftest import dp_optimum, instances
from occlust.clustering import coarsens
from occlust.greedy import GreedyPolicy, greedy_run, max_pair_gain
from occlust.instance import LabeledInstance, gen_all_positive, gen_random, gen_two_clique

POLICIES = ["max_gain", "first_found"]


@pytest.mark.parametrize("policy", POLICIES)
def test_all_positive_single_cluster_each_step(policy):
    for c in greedy_run(gen_all_positive(4), policy):
        assert len(c) == 1


@pytest.mark.parametrize("policy", POLICIES)
def test_all_negative_stays_singletons(policy):
    inst = LabeledInstance(7, [False] * 21)
    for t, c in enumerate(greedy_run(inst, policy), 1):
        assert len(c) == t


@pytest.mark.parametrize("policy", POLICIES)
def test_two_clique_trace(policy):
    trace = greedy_run(gen_two_clique(3, 1), policy)
    final = trace[-1]
    # {a, b1}, {a2, a3}, {b2, b3}
    assert final.blocks() == [(0, 1), (2, 3), (4, 5)]
    assert final.cost == 4
    # every merge that would undo the blocking has gain exactly 0
    assert max_pair_gain(final) == 0


def test_single_vertex():
    trace = greedy_run(LabeledInstance(1, []))
    assert len(trace) == 1 and trace[0].blocks() == [(0,)]


def test_all_positive_m2_is_optimal():
    assert greedy_run(gen_all_positive(2))[-1].profit == 6 == dp_optimum(gen_all_positive(2))


@pytest.mark.parametrize("m,k", [(3, 1), (4, 1), (4, 2), (5, 1)])
def test_two_clique_lower_bound(m, k):
    inst = gen_two_clique(m, k)
    opt_cost = inst.num_edges - dp_optimum(inst)
    for policy in POLICIES:
        assert greedy_run(inst, policy)[-1].cost >= inst.n - 1 - opt_cost


def test_zero_gain_is_not_merged():
    # {0,1} then vertex 2 positive to 0 only: gain 2*1 - 2 = 0, stays apart
    inst = LabeledInstance(3, [True, True, False])
    final = greedy_run(inst)[-1]
    assert final.blocks() == [(0, 1), (2,)]


def test_policies_differ_on_which_pair_comes_first():
    # {0} and {1,2} apart; vertex 3 positive to all three.
    # gain({0},{3}) = 1 comes first in id order, gain({1,2},{3}) = 2 is larger.
    inst = LabeledInstance(4, [False, False, True, True, True, True])
    assert greedy_run(inst, "max_gain")[-1].blocks() == [(0,), (1, 2, 3)]
    # after {0,3}: two of four cross edges positive, gain 0, so it stops
    assert greedy_run(inst, "first_found")[-1].blocks() == [(0, 3), (1, 2)]


def test_merge_cascade():
    # {0,1} and {2} apart until 3 joins {0,1}; then {0,1,3} vs {2} has gain 1
    inst = LabeledInstance(4, [True, False, True, True, True, True])
    trace = greedy_run(inst)
    assert trace[2].blocks() == [(0, 1), (2,)]
    assert trace[3].blocks() == [(0, 1, 2, 3)]


@given(instances(max_n=10), st.sampled_from(POLICIES))
def test_terminal_no_positive_gain_and_merge_only(inst, policy):
    trace = greedy_run(inst, policy)
    for c in trace:
        g = max_pair_gain(c)
        assert g is None or g <= 0
        assert c.check_cache()
    for a, b in zip(trace, trace[1:]):
        assert coarsens(b, a)


@given(instances(max_n=9), st.sampled_from(POLICIES))
def test_half_bound_and_cost_bound(inst, policy):
    final = greedy_run(inst, policy)[-1]
    opt = dp_optimum(inst)
    opt_cost = inst.num_edges - opt
    assert 2 * final.profit >= opt
    assert final.cost <= (2 * inst.n + 1) * opt_cost
    if opt_cost == 0:
        assert final.cost == 0


def test_policy_parse():
    assert GreedyPolicy.parse(None) == GreedyPolicy()
    assert GreedyPolicy.parse("first_found").order.value == "first_found"
    with pytest.raises(ValueError):
        GreedyPolicy.parse("random")


def test_half_of_edges_holds_on_random():
    # Greedy never keeps a positive-gain pair, so it agrees with at least half the edges
    for seed in range(30):
        inst = gen_random(15, 0.5, seed)
        assert 2 * greedy_run(inst)[-1].profit >= math.comb(15, 2)
