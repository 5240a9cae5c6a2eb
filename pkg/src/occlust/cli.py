"""occlust command line: gen, run, verify, search, report.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys

from . import __version__
from .experiments import (ALGORITHMS, SUITES, run_algorithm, search_random, sweep_two_clique,
                          yao_experiment)
from .instance import (InstanceFormatError, gen_all_positive, gen_planted, gen_random,
                       gen_two_clique, gen_yao_gadget, load_instance, save_instance, write_instance)
from .report import ExperimentReport, ReportFormatError, csv_table, parse_config_block

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

GLOBAL_DEFAULTS = {"seed": 0, "out": None, "config": None, "exact_cap": 12, "jobs": 1}


class UsageError(Exception):
    pass


def _global_flags(parser: argparse.ArgumentParser) -> None:
    # SUPPRESS lets the flags appear before or after the subcommand
    g = parser.add_argument_group("global options")
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="base random seed")
    g.add_argument("--out", default=argparse.SUPPRESS, help="output path")
    g.add_argument("--config", default=argparse.SUPPRESS, help="config block file (key = value lines)")
    g.add_argument("--exact-cap", type=int, default=argparse.SUPPRESS, dest="exact_cap",
                   help="largest prefix solved by exhaustive enumeration")
    g.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="occlust", description="Online correlation clustering harness")
    parser.add_argument("--version", action="version", version=f"occlust {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    _global_flags(parser)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a generated instance in .occ format")
    _global_flags(gen)
    gen.add_argument("generator", choices=["all-positive", "yao", "two-clique", "planted", "random"])
    gen.add_argument("--m", type=int)
    gen.add_argument("--k", type=int)
    gen.add_argument("--right-right", default="negative", choices=["negative", "positive"])
    gen.add_argument("--clusters", type=int)
    gen.add_argument("--size", type=int)
    gen.add_argument("--flip", type=float, default=0.0)
    gen.add_argument("--n", type=int)
    gen.add_argument("--p-pos", type=float, default=0.5)

    run = sub.add_parser("run", help="run an online algorithm and write a report")
    _global_flags(run)
    run.add_argument("algorithm", choices=ALGORITHMS)
    run.add_argument("instance", nargs="?", help=".occ file")
    run.add_argument("--from-report", help="re-run the instance embedded in a report")

    verify = sub.add_parser("verify", help="run a property suite over a seeded corpus")
    _global_flags(verify)
    verify.add_argument("suite", choices=sorted(SUITES) + ["all"])
    verify.add_argument("--count", type=int, default=None, help="corpus size")
    verify.add_argument("--max-n", type=int, default=9)

    search = sub.add_parser("search", help="look for inputs with a bad competitive ratio")
    _global_flags(search)
    search.add_argument("algorithm", choices=ALGORITHMS)
    search.add_argument("--family", choices=["random", "two-clique", "yao"], default="random")
    search.add_argument("--n", type=int, default=8)
    search.add_argument("--trials", type=int, default=2000)
    search.add_argument("--objective", choices=["profit", "cost"], default="profit")
    search.add_argument("--m-min", type=int, default=3)
    search.add_argument("--m-max", type=int, default=6)
    search.add_argument("--q", type=float, nargs="*", default=[0.0, 0.25, 0.5, 0.75, 1.0])

    report = sub.add_parser("report", help="CSV table from a directory of reports")
    _global_flags(report)
    report.add_argument("reports_dir")
    return parser


def _opts(args: argparse.Namespace) -> dict:
    return {k: getattr(args, k, v) for k, v in GLOBAL_DEFAULTS.items()}


def _read_config(path: str | None) -> tuple[dict[str, str], list[str]]:
    if path is None:
        return {}, []
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    try:
        block = parse_config_block(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return block, [line for line in text.splitlines() if line.strip()]


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args, opts) -> int:
    def need(*names):
        missing = [n for n in names if getattr(args, n) is None]
        if missing:
            raise UsageError(f"{args.generator} needs --{' --'.join(m.replace('_', '-') for m in missing)}")

    try:
        if args.generator == "all-positive":
            need("m")
            inst, desc = gen_all_positive(args.m), f"gen all-positive m={args.m}"
        elif args.generator == "yao":
            need("m")
            inst = gen_yao_gadget(args.m, args.right_right)
            desc = f"gen yao m={args.m} right_right={args.right_right}"
        elif args.generator == "two-clique":
            need("m", "k")
            inst, desc = gen_two_clique(args.m, args.k), f"gen two-clique m={args.m} k={args.k}"
        elif args.generator == "planted":
            need("clusters", "size")
            inst = gen_planted(args.clusters, args.size, args.flip, opts["seed"])
            desc = f"gen planted clusters={args.clusters} size={args.size} flip={args.flip} seed={opts['seed']}"
        else:
            need("n")
            inst = gen_random(args.n, args.p_pos, opts["seed"])
            desc = f"gen random n={args.n} p_pos={args.p_pos} seed={opts['seed']}"
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    data = write_instance(inst)
    if opts["out"]:
        save_instance(inst, opts["out"])
    else:
        sys.stdout.write(data.decode("ascii"))
    pos = inst.count_positive()
    print(f"{desc}: n={inst.n} positive={pos} negative={inst.num_edges - pos}", file=sys.stderr)
    return EXIT_OK


def cmd_run(args, opts) -> int:
    block, lines = _read_config(opts["config"])
    if args.from_report:
        with open(args.from_report, encoding="utf-8") as fh:
            prior = ExperimentReport.from_text(fh.read())
        inst, desc = prior.load_instance(), prior.instance
        if not lines:
            lines = prior.config
            block = parse_config_block("\n".join(prior.config))
        seed = prior.seed if getattr(args, "seed", None) is None else opts["seed"]
    elif args.instance:
        inst = load_instance(args.instance)
        desc = f"file {os.path.basename(args.instance)}"
        seed = opts["seed"]
    else:
        raise UsageError("run needs an instance path or --from-report")
    try:
        outcome = run_algorithm(inst, args.algorithm, block, descriptor=desc, seed=seed,
                                exact_cap=opts["exact_cap"], config_lines=lines)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rep = outcome.report
    _emit(rep.to_text(), opts["out"])
    print(f"{args.algorithm}: profit={rep.profit} cost={rep.cost} oracle_profit={rep.oracle_profit} "
          f"oracle_cost={rep.oracle_cost} ratio={rep.ratio:.6f} cost_ratio={rep.cost_ratio:.6f}"
          f"{'' if rep.branch == '-' else ' branch=' + rep.branch}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args, opts) -> int:
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    ok = True
    for name in names:
        kw = {"seed": opts["seed"], "jobs": opts["jobs"], "max_n": args.max_n}
        if args.count is not None:
            kw["count"] = args.count
        res = SUITES[name](**kw)
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {name}: {res.checked} checked, {len(res.failures)} failures")
        for note in res.notes:
            print(f"  {note}")
        for f in res.failures[:5]:
            print(f"  counterexample ({f.label}): {f.detail}")
            sys.stdout.write(write_instance(f.inst).decode("ascii"))
        ok &= res.passed
    return EXIT_OK if ok else EXIT_FAIL


def cmd_search(args, opts) -> int:
    block, _ = _read_config(opts["config"])
    if args.family == "two-clique":
        rows = sweep_two_clique(range(args.m_min, args.m_max + 1), args.algorithm, block)
        lines = ["m,n,cost_alg,cost_opt,cost_ratio,n_minus_1_minus_opt"]
        lines += [f"{m},{n},{c},{o},{r!r},{b}" for m, n, c, o, r, b in rows]
        _emit("\n".join(lines) + "\n", opts["out"])
        return EXIT_OK
    if args.family == "yao":
        m = max(1, args.n // 6)
        rows = yao_experiment(m, args.q, block)
        lines = ["q,algorithm,expected_ratio"] + [f"{q},{a},{r!r}" for q, a, r in rows]
        _emit("\n".join(lines) + "\n", opts["out"])
        return EXIT_OK
    try:
        res = search_random(args.algorithm, args.n, args.trials, opts["seed"], block,
                            args.objective, opts["exact_cap"])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(res.worst.to_text(), opts["out"])
    if opts["out"]:
        save_instance(res.worst_instance, os.path.splitext(opts["out"])[0] + ".occ")
    print(f"worst of {res.trials} trials: ratio={res.worst.ratio:.6f} cost_ratio={res.worst.cost_ratio:.6f} "
          f"(oracle {'exact' if res.worst.oracle_exact else 'heuristic'})", file=sys.stderr)
    return EXIT_OK


def cmd_report(args, opts) -> int:
    if not os.path.isdir(args.reports_dir):
        raise UsageError(f"{args.reports_dir} is not a directory")
    _emit(csv_table(args.reports_dir), opts["out"])
    return EXIT_OK


COMMANDS = {"gen": cmd_gen, "run": cmd_run, "verify": cmd_verify, "search": cmd_search, "report": cmd_report}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    opts = _opts(args)
    try:
        return COMMANDS[args.command](args, opts)
    except (UsageError, InstanceFormatError, ReportFormatError) as exc:
        print(f"occlust {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"occlust {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
