"""Single runs as reports, the named property suites, and adversarial search."""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels
from .clustering import Clustering, coarsens, same_partition
from .corpus import Item, dense_corpus, generator_corpus, random_corpus
from .dense import DenseConfig, dense_run, forest_reference, schedule_sparse
from .greedy import GreedyPolicy, greedy_run
from .instance import LabeledInstance, gen_all_positive, gen_random, gen_two_clique, gen_yao_gadget
from .mixed import MixedConfig, mixed_run
from .oracle import exact_optimum, local_search_optimum, oracle
from .report import ExperimentReport, dense_config_from, greedy_policy_from, occ_inline

ALGORITHMS = ("greedy", "dense", "mixed")


@dataclass
class RunOutcome:
    report: ExperimentReport
    trace: list[Clustering]


def run_algorithm(inst: LabeledInstance, algorithm: str, block: dict[str, str] | None = None,
                  descriptor: str = "inline", seed: int = 0, exact_cap: int | None = None,
                  config_lines: list[str] | None = None) -> RunOutcome:
    """Run one algorithm to completion and score it against the offline oracle."""
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    block = dict(block or {})
    dense_cfg = dense_config_from(block, exact_cap=exact_cap)
    policy = greedy_policy_from(block)
    start = time.perf_counter()
    branch = "-"
    updates: list[str] = []
    if algorithm == "greedy":
        trace = greedy_run(inst, policy)
    elif algorithm == "dense":
        res = dense_run(inst, dense_cfg)
        trace = res.trace
        updates = [_update_line(e) for e in res.schedule.chain]
    else:
        p = float(block.get("p", 0.5))
        branch, trace = mixed_run(inst, MixedConfig(p, dense_cfg, policy, seed))
    elapsed = time.perf_counter() - start
    final = trace[-1]
    opt = oracle(inst, inst.n, "exact_then_heuristic", dense_cfg.exact_cap, dense_cfg.restarts,
                 dense_cfg.seed)
    score = final.score()
    report = ExperimentReport(
        instance=descriptor, instance_occ=occ_inline(inst), instance_sha256=inst.digest(),
        algorithm=algorithm, n=inst.n, profit=score.profit, cost=score.cost,
        oracle_profit=opt.profit, oracle_cost=opt.cost, oracle_exact=opt.exact,
        oracle_method=opt.method, seed=seed, branch=branch, ms=elapsed * 1000.0,
        config=list(config_lines if config_lines is not None else
                    [f"{k} = {v}" for k, v in block.items()]),
        updates=updates, clusters=[" ".join(map(str, b)) for b in final.blocks()],
    )
    return RunOutcome(report, trace)


def _update_line(e) -> str:
    d = e.diagnostics
    return (f"t={e.t} prev={e.prev_t} oracle_profit={d['oracle_profit']} "
            f"exact={'true' if d['oracle_exact'] else 'false'} nonsingleton={d['nonsingleton']} "
            f"marked={d['marked']} tracked={d.get('tracked', 0)} frozen={d.get('frozen', 0)}")


# -- suites ---------------------------------------------------------------------------


@dataclass
class Failure:
    label: str
    inst: LabeledInstance
    detail: str


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list[Failure] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def _map(fn: Callable, items: list, jobs: int) -> list:
    # ordered results either way, so reductions are deterministic
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def greedy_corpus(count: int, max_n: int, seed: int) -> list[Item]:
    return random_corpus(count, max_n, seed) + generator_corpus(12)


def _greedy_bounds(item: Item) -> list[str]:
    inst = item.inst
    opt = exact_optimum(inst)
    problems = []
    for policy in ("max_gain", "first_found"):
        final = greedy_run(inst, policy)[-1]
        s = final.score()
        if 2 * s.profit < opt.profit:
            problems.append(f"half: {policy} profit {s.profit} < OPT {opt.profit} / 2")
        if s.cost > (2 * inst.n + 1) * opt.cost:
            problems.append(f"2n+1: {policy} cost {s.cost} > (2n+1)*{opt.cost}")
        if opt.cost == 0 and s.cost != 0:
            problems.append(f"2n+1: {policy} cost {s.cost} on a perfectly clusterable instance")
    return problems


def suite_greedy(kind: str, count: int = 300, max_n: int = 9, seed: int = 0,
                 jobs: int = 1) -> SuiteResult:
    name = "greedy-half" if kind == "half" else "greedy-2n1"
    items = greedy_corpus(count, max_n, seed)
    res = SuiteResult(name)
    for item, problems in zip(items, _map(_greedy_bounds, items, jobs)):
        res.checked += 1
        for p in problems:
            if p.startswith(kind):
                res.failures.append(Failure(item.label, item.inst, p))
    return res


def dense_check(args: tuple[Item, DenseConfig]) -> dict:
    item, cfg = args
    run = dense_run(item.inst, cfg)
    forest = forest_reference(item.inst, cfg, chain=run.schedule.chain)
    budget_bad = [e.t for e in run.schedule.chain
                  if e.diagnostics["nonsingleton"] > cfg.k2
                  or any(len(b) > 1 and b not in set(map(frozenset, e.opt.blocks()))
                         for b in map(frozenset, e.opt_hat.blocks()))]
    merge_bad = [i + 1 for i, (a, b) in enumerate(zip(run.trace, run.trace[1:])) if not coarsens(b, a)]
    return {
        "equal": same_partition(run.final, forest),
        "times": run.times,
        "budget_bad": budget_bad,
        "sparse": schedule_sparse(run.times, cfg.tau),
        "merge_bad": merge_bad,
        "frozen": len(run.state.frozen),
    }


def relaxed_config(tau: float, exact_cap: int = 12) -> DenseConfig:
    return DenseConfig(alpha=0.01, tau=tau, t_min=4, oracle_policy="exact_only", exact_cap=exact_cap)


def suite_dense(which: str, count: int = 50, seed: int = 0, jobs: int = 1) -> SuiteResult:
    names = {"forest": "dense-forest", "budget": "opt-hat-budget", "sparsity": "schedule-sparsity"}
    res = SuiteResult(names[which])
    work = [(item, relaxed_config(tau)) for item, tau in dense_corpus(count, seed)]
    for (item, cfg), out in zip(work, _map(dense_check, work, jobs)):
        res.checked += 1
        if which == "forest" and not out["equal"]:
            res.failures.append(Failure(item.label, item.inst, f"tau={cfg.tau}: Dense differs from forest"))
        if which == "budget" and out["budget_bad"]:
            res.failures.append(Failure(item.label, item.inst, f"tau={cfg.tau}: budget broken at {out['budget_bad']}"))
        if which == "sparsity" and not out["sparse"]:
            res.failures.append(Failure(item.label, item.inst, f"tau={cfg.tau}: times {out['times']}"))
    return res


def _merge_only(args: tuple[Item, int]) -> list[str]:
    item, seed = args
    inst = item.inst
    problems = []
    traces = {f"greedy/{p}": greedy_run(inst, p) for p in ("max_gain", "first_found")}
    for tau in (1.1, 1.5):
        cfg = relaxed_config(tau)
        traces[f"dense/tau={tau}"] = dense_run(inst, cfg).trace
        branch, tr = mixed_run(inst, MixedConfig(0.5, cfg, GreedyPolicy(), seed))
        traces[f"mixed/{branch}/tau={tau}"] = tr
    for name, trace in traces.items():
        for i, (a, b) in enumerate(zip(trace, trace[1:])):
            if not coarsens(b, a):
                problems.append(f"{name}: split between t={i + 1} and t={i + 2}")
    return problems


def suite_merge_only(count: int = 300, max_n: int = 9, seed: int = 0, jobs: int = 1) -> SuiteResult:
    res = SuiteResult("merge-only")
    items = greedy_corpus(count, max_n, seed) + [it for it, _ in dense_corpus(50, seed)]
    work = [(it, seed + i) for i, it in enumerate(items)]
    for (item, _), problems in zip(work, _map(_merge_only, work, jobs)):
        res.checked += 1
        res.failures.extend(Failure(item.label, item.inst, p) for p in problems)
    return res


def bell_numbers(upto: int) -> list[int]:
    """B(0..upto) via the Bell triangle."""
    row = [1]
    out = [1]
    for _ in range(upto):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
        out.append(row[0])
    return out


def _ls_vs_exact(item: Item) -> tuple[int, int]:
    exact = exact_optimum(item.inst).profit
    heur = local_search_optimum(item.inst, restarts=8, seed=0).profit
    return exact, heur


def suite_oracle(count: int = 300, max_n: int = 9, seed: int = 0, jobs: int = 1) -> SuiteResult:
    res = SuiteResult("oracle-bell")
    bell = bell_numbers(10)
    for t in range(1, 11):
        inst = gen_random(t, 0.5, seed + t)
        _, _, visited = _kernels.enumerate_best(inst.sign_matrix)
        res.checked += 1
        if visited != bell[t]:
            res.failures.append(Failure(f"bell t={t}", inst, f"visited {visited} != B({t}) = {bell[t]}"))
    items = random_corpus(count, max_n, seed)
    equal = 0
    for item, (exact, heur) in zip(items, _map(_ls_vs_exact, items, jobs)):
        res.checked += 1
        if heur > exact:
            res.failures.append(Failure(item.label, item.inst, f"local search {heur} beats exact {exact}"))
        equal += heur == exact
    res.notes.append(f"local search matched exact on {equal}/{len(items)} instances")
    return res


SUITES = {
    "greedy-half": lambda **kw: suite_greedy("half", **kw),
    "greedy-2n1": lambda **kw: suite_greedy("2n+1", **kw),
    "dense-forest": lambda count=50, max_n=None, seed=0, jobs=1: suite_dense("forest", count, seed, jobs),
    "opt-hat-budget": lambda count=50, max_n=None, seed=0, jobs=1: suite_dense("budget", count, seed, jobs),
    "schedule-sparsity": lambda count=50, max_n=None, seed=0, jobs=1: suite_dense("sparsity", count, seed, jobs),
    "merge-only": lambda **kw: suite_merge_only(**kw),
    "oracle-bell": lambda **kw: suite_oracle(**kw),
}


# -- adversarial search ------------------------------------------------------------------


def _trial_instance(n: int, rng: np.random.Generator) -> LabeledInstance:
    p = float(rng.uniform(0.2, 0.95))
    base = gen_random(n, p, int(rng.integers(0, 2**63 - 1)))
    return base.permute(rng.permutation(n).tolist())


def _final(inst: LabeledInstance, algorithm: str, block: dict[str, str], seed: int) -> Clustering:
    if algorithm == "greedy":
        return greedy_run(inst, greedy_policy_from(block))[-1]
    cfg = dense_config_from(block)
    if algorithm == "dense":
        return dense_run(inst, cfg, keep_trace=False).final
    _, trace = mixed_run(inst, MixedConfig(float(block.get("p", 0.5)), cfg, greedy_policy_from(block), seed))
    return trace[-1]


@dataclass
class SearchResult:
    worst: ExperimentReport
    worst_instance: LabeledInstance
    trials: int
    objective: str
    rows: list[tuple] = field(default_factory=list)


def search_random(algorithm: str, n: int, trials: int, seed: int, block: dict[str, str] | None = None,
                  objective: str = "profit", exact_cap: int = 12) -> SearchResult:
    """Random instances and arrival orders; keep the worst certified ratio."""
    if n > exact_cap:
        raise ValueError(f"n={n} exceeds the exact cap {exact_cap}; ratios could not be certified")
    block = dict(block or {})
    rng = np.random.default_rng(seed)
    worst_key, worst_inst = None, None
    for trial in range(trials):
        inst = _trial_instance(n, rng)
        final = _final(inst, algorithm, block, seed + trial)
        opt = exact_optimum(inst, exact_cap=exact_cap)
        s = final.score()
        if objective == "profit":
            key = s.profit / opt.profit if opt.profit else 1.0
        else:
            key = -(s.cost / max(1, opt.cost))
        if worst_key is None or key < worst_key:
            worst_key, worst_inst = key, inst
    outcome = run_algorithm(worst_inst, algorithm, block, descriptor=f"search n={n} seed={seed}",
                            seed=seed, exact_cap=exact_cap)
    return SearchResult(outcome.report, worst_inst, trials, objective)


def sweep_two_clique(m_values: range, algorithm: str = "greedy", block: dict[str, str] | None = None) -> list[tuple]:
    """(m, n, cost_alg, cost_opt, cost_ratio, bound) rows for k = 1."""
    rows = []
    for m in m_values:
        inst = gen_two_clique(m, 1)
        final = _final(inst, algorithm, dict(block or {}), 0)
        opt = exact_optimum(inst)
        c = final.score().cost
        rows.append((m, inst.n, c, opt.cost, c / max(1, opt.cost), inst.n - 1 - opt.cost))
    return rows


def yao_experiment(m: int, q_values: list[float], block: dict[str, str] | None = None) -> list[tuple]:
    """Distributional ratio E[profit ALG] / E[profit OPT] over {all-positive, gadget}.

    The all-positive input is drawn with probability q, the gadget otherwise.
    Rows: (q, algorithm, ratio) for each deterministic algorithm available here.
    """
    block = dict(block or {})
    g1, g2 = gen_all_positive(m), gen_yao_gadget(m)
    opt1, opt2 = exact_optimum(g1).profit, exact_optimum(g2).profit
    algs = {"greedy/max_gain": lambda i: greedy_run(i, "max_gain")[-1],
            "greedy/first_found": lambda i: greedy_run(i, "first_found")[-1],
            "dense": lambda i: dense_run(i, dense_config_from(block), keep_trace=False).final}
    prof = {name: (f(g1).score().profit, f(g2).score().profit) for name, f in algs.items()}
    rows = []
    for q in q_values:
        denom = q * opt1 + (1 - q) * opt2
        for name, (p1, p2) in prof.items():
            rows.append((q, name, (q * p1 + (1 - q) * p2) / denom))
    return rows
