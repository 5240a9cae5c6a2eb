"""Config blocks, experiment reports and their CSV roll-up.

A report is plain text, one ``key: value`` per line, keys in the fixed order
of :data:`FIELDS`; ``config``, ``update`` and ``cluster`` lines may repeat.
"""
from __future__ import annotations

import csv
import io
import logging
import os
from dataclasses import dataclass, field

from .dense import DenseConfig
from .greedy import GreedyPolicy
from .instance import LabeledInstance, read_instance, write_instance

log = logging.getLogger(__name__)

MAGIC = "occlust-report 1"

FIELDS = (
    "instance", "instance_sha256", "instance_occ", "algorithm", "config", "seed", "branch",
    "n", "profit", "cost", "oracle_profit", "oracle_cost", "oracle_exact", "oracle_method",
    "ratio", "cost_ratio", "ms", "update", "cluster",
)
REPEATED = {"config", "update", "cluster"}

CSV_COLUMNS = ("instance", "algorithm", "n", "profit", "opt_profit", "ratio", "cost", "opt_cost",
               "cost_ratio", "seed", "ms")


class ReportFormatError(ValueError):
    pass


# -- config block ------------------------------------------------------------------

CONFIG_KEYS = ("alpha", "tau", "t_min", "eta", "oracle_policy", "exact_cap", "restarts", "seed",
               "p", "greedy_policy")


def parse_config_block(text: str) -> dict[str, str]:
    """``key = value`` (or ``key: value``) lines; ``#`` starts a comment."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        for sep in ("=", ":"):
            if sep in line:
                key, value = (s.strip() for s in line.split(sep, 1))
                break
        else:
            raise ValueError(f"config line {lineno}: expected key = value")
        if key not in CONFIG_KEYS:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        out[key] = value
    return out


def dense_config_from(block: dict[str, str], **overrides) -> DenseConfig:
    vals = dict(block)
    vals.update({k: str(v) for k, v in overrides.items() if v is not None})
    kwargs = {}
    if "alpha" in vals:
        kwargs["alpha"] = float(vals["alpha"])
    if "tau" in vals:
        kwargs["tau"] = float(vals["tau"])
    for key in ("t_min", "exact_cap", "restarts", "seed"):
        if key in vals:
            kwargs[key] = int(vals[key])
    if vals.get("eta"):
        kwargs["eta"] = float(vals["eta"])
    if "oracle_policy" in vals:
        kwargs["oracle_policy"] = vals["oracle_policy"]
    kwargs.setdefault("alpha", 0.01)
    kwargs.setdefault("tau", 1.5)
    return DenseConfig(**kwargs)


def greedy_policy_from(block: dict[str, str]) -> GreedyPolicy:
    return GreedyPolicy.parse(block.get("greedy_policy"))


# -- reports -----------------------------------------------------------------------


def profit_ratio(profit: int, opt_profit: int) -> float:
    return 1.0 if opt_profit == 0 else profit / opt_profit


def cost_ratio(cost: int, opt_cost: int) -> float:
    return cost / max(1, opt_cost)


@dataclass
class ExperimentReport:
    instance: str
    instance_occ: str
    algorithm: str
    n: int
    profit: int
    cost: int
    oracle_profit: int
    oracle_cost: int
    oracle_exact: bool
    oracle_method: str
    seed: int = 0
    branch: str = "-"
    ms: float = 0.0
    config: list[str] = field(default_factory=list)
    updates: list[str] = field(default_factory=list)
    clusters: list[str] = field(default_factory=list)
    instance_sha256: str = ""

    @property
    def ratio(self) -> float:
        return profit_ratio(self.profit, self.oracle_profit)

    @property
    def cost_ratio(self) -> float:
        return cost_ratio(self.cost, self.oracle_cost)

    def load_instance(self) -> LabeledInstance:
        return read_instance(self.instance_occ.replace("/", "\n") + "\n")

    def to_text(self) -> str:
        lines = [MAGIC]

        def put(key, value):
            lines.append(f"{key}: {value}")

        put("instance", self.instance)
        put("instance_sha256", self.instance_sha256)
        put("instance_occ", self.instance_occ)
        put("algorithm", self.algorithm)
        for c in self.config:
            put("config", c)
        put("seed", self.seed)
        put("branch", self.branch)
        put("n", self.n)
        put("profit", self.profit)
        put("cost", self.cost)
        put("oracle_profit", self.oracle_profit)
        put("oracle_cost", self.oracle_cost)
        put("oracle_exact", "true" if self.oracle_exact else "false")
        put("oracle_method", self.oracle_method)
        put("ratio", repr(self.ratio))
        put("cost_ratio", repr(self.cost_ratio))
        put("ms", f"{self.ms:.3f}")
        for u in self.updates:
            put("update", u)
        for c in self.clusters:
            put("cluster", c)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ExperimentReport":
        lines = text.splitlines()
        if not lines or lines[0].strip() != MAGIC:
            raise ReportFormatError("missing report header")
        single: dict[str, str] = {}
        multi: dict[str, list[str]] = {k: [] for k in REPEATED}
        for lineno, line in enumerate(lines[1:], 2):
            if not line.strip():
                continue
            if ": " not in line and not line.endswith(":"):
                raise ReportFormatError(f"line {lineno}: expected 'key: value'")
            key, _, value = line.partition(":")
            value = value[1:] if value.startswith(" ") else value
            if key not in FIELDS:
                raise ReportFormatError(f"line {lineno}: unknown field {key!r}")
            if key in REPEATED:
                multi[key].append(value)
            elif key in single:
                raise ReportFormatError(f"line {lineno}: duplicate field {key!r}")
            else:
                single[key] = value
        try:
            rep = cls(
                instance=single["instance"],
                instance_occ=single["instance_occ"],
                instance_sha256=single.get("instance_sha256", ""),
                algorithm=single["algorithm"],
                n=int(single["n"]),
                profit=int(single["profit"]),
                cost=int(single["cost"]),
                oracle_profit=int(single["oracle_profit"]),
                oracle_cost=int(single["oracle_cost"]),
                oracle_exact=single["oracle_exact"] == "true",
                oracle_method=single["oracle_method"],
                seed=int(single.get("seed", 0)),
                branch=single.get("branch", "-"),
                ms=float(single.get("ms", 0.0)),
                config=multi["config"],
                updates=multi["update"],
                clusters=multi["cluster"],
            )
        except (KeyError, ValueError) as exc:
            raise ReportFormatError(f"bad report: {exc}") from exc
        for key, recomputed in (("ratio", rep.ratio), ("cost_ratio", rep.cost_ratio)):
            if key in single and float(single[key]) != recomputed:
                raise ReportFormatError(f"stored {key} {single[key]} disagrees with its scores")
        return rep


def occ_inline(inst: LabeledInstance) -> str:
    return write_instance(inst).decode("ascii").rstrip("\n").replace("\n", "/")


def csv_table(reports_dir: str | os.PathLike) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    names = sorted(os.listdir(reports_dir)) if os.path.isdir(reports_dir) else []
    for name in names:
        path = os.path.join(reports_dir, name)
        if not os.path.isfile(path):
            continue
        try:
            with open(path, encoding="utf-8") as fh:
                rep = ExperimentReport.from_text(fh.read())
        except (OSError, UnicodeDecodeError, ReportFormatError) as exc:
            log.warning("skipping %s: %s", name, exc)
            continue
        writer.writerow([
            rep.instance, rep.algorithm, rep.n, rep.profit, rep.oracle_profit,
            repr(rep.ratio),
            rep.cost, rep.oracle_cost, repr(rep.cost_ratio), rep.seed, f"{rep.ms:.3f}",
        ])
    return buf.getvalue()
