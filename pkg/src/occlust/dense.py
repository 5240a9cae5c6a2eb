"""The Dense online algorithm and its offline forest reconstruction.

Dense stays idle until the near-optimal profit of the prefix is *large*
(at least ``(1 - alpha) * C(t, 2)``), then rebuilds at update times spaced by
powers of ``tau``.  At each update it takes an oracle clustering, prunes it to
a bounded number of tracked clusters, and grows each tracked online cluster
into the pruned cluster that half-contains what it tracked before.

Times are arrival counts: the prefix at time ``t`` is vertices ``range(t)``,
and the slice of arrivals between update times ``t_prev < t`` is
``range(t_prev, t)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .clustering import Clustering, as_blocks
from .instance import LabeledInstance
from .oracle import DEFAULT_EXACT_CAP, OraclePolicy, OracleResult, oracle


class DenseInvariantError(RuntimeError):
    def __init__(self, t: int, message: str):
        super().__init__(f"update at t={t}: {message}")
        self.t = t


def _rational(x: float) -> Fraction:
    # decimal reading, so alpha=0.01 means exactly 1/100
    return Fraction(repr(x))


@dataclass(frozen=True)
class DenseConfig:
    alpha: float
    tau: float
    t_min: int = 100
    eta: float | None = None
    oracle_policy: str = OraclePolicy.EXACT_THEN_HEURISTIC.value
    exact_cap: int = DEFAULT_EXACT_CAP
    restarts: int = 8
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        if not self.tau > 1:
            raise ValueError("tau must exceed 1")
        if self.t_min < 1:
            raise ValueError("t_min must be >= 1")
        if self.eta is not None and not 0 < self.eta < 0.5:
            raise ValueError("eta must lie in (0, 1/2)")
        OraclePolicy(self.oracle_policy)

    @property
    def eps(self) -> float:
        return self.alpha ** 0.25

    @property
    def k2(self) -> int:
        """floor(1/eps^2) = floor(alpha^-1/2), computed without rounding error."""
        return math.isqrt(math.floor(1 / _rational(self.alpha)))

    @property
    def k1(self) -> int:
        """floor(1/eps) = floor(alpha^-1/4)."""
        return math.isqrt(self.k2)

    def as_block(self) -> dict[str, str]:
        return {
            "alpha": repr(self.alpha),
            "tau": repr(self.tau),
            "t_min": str(self.t_min),
            "eta": "" if self.eta is None else repr(self.eta),
            "oracle_policy": str(OraclePolicy(self.oracle_policy).value),
            "exact_cap": str(self.exact_cap),
            "restarts": str(self.restarts),
            "seed": str(self.seed),
        }


# -- small predicates ---------------------------------------------------------


def is_large(oracle_profit: int, t: int, alpha: float) -> bool:
    """profit >= (1 - alpha) * t(t-1)/2, in exact rational arithmetic."""
    if t < 1:
        raise ValueError("t must be >= 1")
    return 2 * oracle_profit >= (1 - _rational(alpha)) * t * (t - 1)


def half_contained(a: Iterable[int], b: Iterable[int]) -> bool:
    """|a & b| > |a| / 2."""
    a = set(a)
    if not a:
        raise ValueError("half-containment needs a non-empty first set")
    return 2 * len(a.intersection(b)) > len(a)


def checkpoints(tau: float, upto: int) -> list[int]:
    """Distinct integers ceil(tau^j), j >= 1, up to and including the first one > upto."""
    base = _rational(tau)
    out: list[int] = []
    power = base
    while True:
        c = math.ceil(power)
        if not out or c > out[-1]:
            out.append(c)
        if c > upto:
            return out
        power *= base


def next_checkpoint(tau: float, t: int) -> int:
    """Smallest ceil(tau^j) strictly greater than t."""
    return checkpoints(tau, t)[-1]


def schedule_sparse(times: list[int], tau: float) -> bool:
    """At most one update time inside each window [c_j, c_{j+1})."""
    if not times:
        return True
    marks = checkpoints(tau, max(times))
    for lo, hi in zip(marks, marks[1:]):
        if sum(1 for t in times if lo <= t < hi) > 1:
            return False
    return True


def _by_size(blocks: Iterable[frozenset[int]]) -> list[frozenset[int]]:
    return sorted(blocks, key=lambda b: (-len(b), min(b)))


# -- pruned near-optimal clusterings ---------------------------------------------


def build_opt_hat_1(opt_1: Clustering, keep: int) -> Clustering:
    """Keep the ``keep`` largest clusters of the oracle solution, split the rest."""
    kept = _by_size(as_blocks(opt_1))[:keep]
    covered = set().union(*kept) if kept else set()
    rest = [[v] for v in range(opt_1.horizon) if v not in covered]
    return Clustering.from_blocks(opt_1.inst, [sorted(b) for b in kept] + rest, opt_1.horizon)


def build_opt_hat_next(prev_hat: Clustering, opt_i: Clustering, k1: int,
                       k2: int) -> tuple[Clustering, set[int]]:
    """Mark clusters of ``opt_i`` and keep only those (plus singletons).

    A cluster D is marked when one of the ``k2 - k1`` largest non-singleton
    clusters of ``prev_hat`` is half-contained in D, or when D is among the
    ``k1`` largest clusters of ``opt_i``.  Returns the pruned clustering and the
    ids (smallest vertex) of the marked clusters.
    """
    if prev_hat.horizon >= opt_i.horizon:
        raise ValueError("update times must increase")
    tracked = _by_size(b for b in as_blocks(prev_hat) if len(b) > 1)[: max(k2 - k1, 0)]
    ranked = _by_size(as_blocks(opt_i))
    top = {min(b) for b in ranked[:k1]}
    marked = set()
    for d in ranked:
        if min(d) in top or any(half_contained(a, d) for a in tracked):
            marked.add(min(d))
    keep = [sorted(d) for d in ranked if min(d) in marked]
    covered = {v for d in keep for v in d}
    rest = [[v] for v in range(opt_i.horizon) if v not in covered]
    return Clustering.from_blocks(opt_i.inst, keep + rest, opt_i.horizon), marked


# -- update schedule and chain -----------------------------------------------------


@dataclass
class ChainEntry:
    t: int
    prev_t: int
    oracle: OracleResult
    opt_hat: Clustering
    marked: set[int]
    diagnostics: dict = field(default_factory=dict)

    @property
    def opt(self) -> Clustering:
        return self.oracle.clustering

    def hat_blocks(self) -> list[frozenset[int]]:
        return sorted(as_blocks(self.opt_hat), key=min)


OracleFn = Callable[[LabeledInstance, int], OracleResult]


def default_oracle(config: DenseConfig) -> OracleFn:
    def run(inst: LabeledInstance, t: int) -> OracleResult:
        return oracle(inst, t, config.oracle_policy, config.exact_cap, config.restarts, config.seed)
    return run


class Schedule:
    """Online decision of update times plus the pruned-clustering chain.

    Feed every arrival time to :meth:`observe`; it returns a new
    :class:`ChainEntry` when that time is an update time, else ``None``.
    """

    def __init__(self, inst: LabeledInstance, config: DenseConfig, oracle_fn: OracleFn | None = None):
        self.inst = inst
        self.config = config
        self.oracle_fn = oracle_fn or default_oracle(config)
        self.chain: list[ChainEntry] = []
        self.queries: list[tuple[int, int, bool]] = []  # (t, oracle profit, large)
        self.waiting_from = config.t_min

    @property
    def times(self) -> list[int]:
        return [e.t for e in self.chain]

    def observe(self, t: int) -> ChainEntry | None:
        if t < self.waiting_from:
            return None
        res = self.oracle_fn(self.inst, t)
        large = is_large(res.profit, t, self.config.alpha)
        self.queries.append((t, res.profit, large))
        if not large:
            return None
        entry = self._extend(t, res)
        self.chain.append(entry)
        self.waiting_from = next_checkpoint(self.config.tau, t)
        return entry

    def _extend(self, t: int, res: OracleResult) -> ChainEntry:
        cfg = self.config
        prev_t = self.chain[-1].t if self.chain else 0
        diag = {"oracle_profit": res.profit, "oracle_exact": res.exact, "oracle_method": res.method}
        if not self.chain:
            hat = build_opt_hat_1(res.clustering, cfg.k2)
            marked = {min(b) for b in as_blocks(hat) if len(b) > 1}
            split = [b for b in as_blocks(res.clustering) if len(b) > 1 and b not in set(as_blocks(hat))]
            diag["split_cost_increase"] = res.clustering.profit - hat.profit
            diag["split_bound"] = max((len(b) for b in split), default=0) * t
        else:
            hat, marked = build_opt_hat_next(self.chain[-1].opt_hat, res.clustering, cfg.k1, cfg.k2)
        diag["nonsingleton"] = sum(1 for b in as_blocks(hat) if len(b) > 1)
        diag["marked"] = len(marked)
        return ChainEntry(t, prev_t, res, hat, marked, diag)


def build_chain(inst: LabeledInstance, config: DenseConfig, horizon: int | None = None,
                oracle_fn: OracleFn | None = None) -> list[ChainEntry]:
    horizon = inst.n if horizon is None else horizon
    sched = Schedule(inst, config, oracle_fn)
    for t in range(1, horizon + 1):
        sched.observe(t)
    return sched.chain


def next_update_time(chain: list[ChainEntry], inst: LabeledInstance, config: DenseConfig,
                     horizon: int | None = None, oracle_fn: OracleFn | None = None) -> int | None:
    """First update time after the chain's last one, looking no further than ``horizon``."""
    horizon = inst.n if horizon is None else horizon
    oracle_fn = oracle_fn or default_oracle(config)
    start = next_checkpoint(config.tau, chain[-1].t) if chain else config.t_min
    for t in range(start, horizon + 1):
        if is_large(oracle_fn(inst, t).profit, t, config.alpha):
            return t
    return None


# -- the online algorithm ------------------------------------------------------------


@dataclass
class DenseState:
    clustering: Clustering
    config: DenseConfig
    chain: list[ChainEntry] = field(default_factory=list)
    # online cluster id -> the pruned-clustering block it tracks
    repr: dict[int, frozenset[int]] = field(default_factory=dict)
    frozen: set[int] = field(default_factory=set)


def dense_update(state: DenseState, entry: ChainEntry) -> DenseState:
    """Realize the new pruned clustering by merges at update time ``entry.t``.

    Each block D of the pruned clustering absorbs the fresh arrivals it
    contains and every tracked online cluster whose tracked block is
    half-contained in D; the result then tracks D.  Tracked clusters absorbed
    nowhere stop being tracked and never change again.
    """
    c = state.clustering
    t, prev_t = entry.t, entry.prev_t
    if c.horizon != t:
        raise DenseInvariantError(t, f"clustering horizon {c.horizon} != update time")
    for v in range(prev_t, t):
        if len(c.clusters[c.assignment[v]]) != 1:
            raise DenseInvariantError(t, f"arrival {v} is no longer a singleton")
    tracked = sorted(state.repr.items())
    claimed: set[int] = set()
    new_repr: dict[int, frozenset[int]] = {}
    for d in entry.hat_blocks():
        parts = [c.assignment[v] for v in sorted(d) if v >= prev_t]
        for cid, a in tracked:
            if half_contained(a, d):
                if cid in claimed:
                    raise DenseInvariantError(t, f"cluster {cid} half-contained in two blocks")
                claimed.add(cid)
                parts.append(cid)
        if not parts:
            continue
        survivor = parts[0]
        for other in parts[1:]:
            survivor = c.merge(c.assignment[survivor], c.assignment[other])
        new_repr[c.assignment[survivor]] = d
    for cid, _ in tracked:
        if cid not in claimed:
            state.frozen.add(cid)
    state.repr = new_repr
    entry.diagnostics["tracked"] = len(new_repr)
    entry.diagnostics["frozen"] = len(state.frozen)
    state.chain.append(entry)
    return state


@dataclass
class DenseResult:
    trace: list[Clustering]
    state: DenseState
    schedule: Schedule

    @property
    def final(self) -> Clustering:
        return self.state.clustering

    @property
    def times(self) -> list[int]:
        return self.schedule.times


def dense_run(inst: LabeledInstance, config: DenseConfig, oracle_fn: OracleFn | None = None,
              keep_trace: bool = True) -> DenseResult:
    """Run Dense over the whole stream; arrivals stay singletons between updates."""
    sched = Schedule(inst, config, oracle_fn)
    state = DenseState(Clustering(inst), config)
    trace = []
    for t in range(1, inst.n + 1):
        state.clustering.arrive()
        entry = sched.observe(t)
        if entry is not None:
            dense_update(state, entry)
        if keep_trace:
            trace.append(state.clustering.copy())
    return DenseResult(trace, state, sched)


# -- offline forest reconstruction -----------------------------------------------------


def forest_reference(inst: LabeledInstance, config: DenseConfig, t: int | None = None,
                     chain: list[ChainEntry] | None = None) -> Clustering:
    """The clustering read off the half-containment forest at time ``t``.

    Nodes are the blocks of every pruned clustering with update time <= t; a
    block of level i-1 hangs under the block of level i that half-contains it.
    Each tree contributes one cluster holding, for every node, that node's
    share of the arrivals in its own level's interval.
    """
    t = inst.n if t is None else t
    if chain is None:
        chain = build_chain(inst, config, t)
    levels = [e for e in chain if e.t <= t]
    nodes: list[tuple[int, frozenset[int]]] = []
    index: dict[tuple[int, int], int] = {}
    for i, e in enumerate(levels):
        for b in e.hat_blocks():
            index[(i, min(b))] = len(nodes)
            nodes.append((i, b))
    parent = list(range(len(nodes)))
    for k, (i, a) in enumerate(nodes):
        if i + 1 >= len(levels):
            continue
        for b in levels[i + 1].hat_blocks():
            if half_contained(a, b):
                parent[k] = index[(i + 1, min(b))]
                break

    def root(k: int) -> int:
        while parent[k] != k:
            k = parent[k]
        return k

    trees: dict[int, set[int]] = {}
    for k, (i, a) in enumerate(nodes):
        lo = levels[i - 1].t if i > 0 else 0
        hi = levels[i].t
        share = {v for v in a if lo <= v < hi}
        trees.setdefault(root(k), set()).update(share)
    last = levels[-1].t if levels else 0
    blocks = [sorted(b) for b in trees.values() if b]
    blocks += [[v] for v in range(last, t)]
    return Clustering.from_blocks(inst, blocks, t)


# -- constants ----------------------------------------------------------------------


def constants_slack(alpha: float, tau: float, eta: float) -> float:
    """Right-hand side of the constant condition minus eta (>= 0 means it holds)."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if not tau > 1:
        raise ValueError("tau must exceed 1")
    if not 0 < eta < 0.5:
        raise ValueError("eta must lie in (0, 1/2)")
    eps = alpha ** 0.25
    inner = (2 * math.sqrt(3) + 4.5) * eps + eps / (1 - eps) + alpha / 2
    rhs = 1.5 - tau ** 2 - inner * 2 * (2 * tau - 1) / (tau - 1)
    return rhs - eta


def check_constants(alpha: float, tau: float, eta: float) -> bool:
    return constants_slack(alpha, tau, eta) >= 0
