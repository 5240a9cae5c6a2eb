import csv
import io
import math

import pytest

from occlust.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from occlust.instance import gen_all_positive, gen_planted, read_instance, save_instance
from occlust.report import (ExperimentReport, ReportFormatError, csv_table, dense_config_from,
                            parse_config_block)

RELAXED_TEXT = "alpha = 0.01\ntau = 1.1\nt_min = 4\noracle_policy = exact_only\n"


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def relaxed(tmp_path):
    path = tmp_path / "relaxed.cfg"
    path.write_text(RELAXED_TEXT)
    return str(path)


def test_gen_two_clique(capsys):
    code, out, err = run_cli(capsys, "gen", "two-clique", "--m", "3", "--k", "1")
    assert code == EXIT_OK
    assert read_instance(out).n == 6
    assert out.count("+") == 7
    assert "n=6 positive=7 negative=8" in err


def test_gen_all_positive(capsys):
    code, out, _ = run_cli(capsys, "gen", "all-positive", "--m", "2")
    assert code == EXIT_OK and out.startswith("4\n") and out.count("+") == 6


def test_gen_planted_to_file(capsys, tmp_path):
    path = tmp_path / "p.occ"
    code, _, _ = run_cli(capsys, "gen", "planted", "--clusters", "2", "--size", "3", "--seed", "1",
                         "--out", str(path))
    assert code == EXIT_OK
    assert read_instance(path.read_bytes()) == gen_planted(2, 3, 0.0, seed=1)


@pytest.mark.parametrize("argv", [["gen", "two-clique", "--m", "3"],
                                  ["gen", "two-clique", "--m", "3", "--k", "3"],
                                  ["gen", "nonsense"],
                                  ["run", "greedy"],
                                  ["verify", "no-such-suite"]])
def test_usage_errors(capsys, argv):
    assert run_cli(capsys, *argv)[0] == EXIT_USAGE


def test_bad_instance_file(capsys, tmp_path):
    path = tmp_path / "bad.occ"
    path.write_bytes(b"3\n+\n+x\n")
    code, _, err = run_cli(capsys, "run", "greedy", str(path))
    assert code == EXIT_USAGE and "line 3" in err


def test_missing_instance_file(capsys, tmp_path):
    assert run_cli(capsys, "run", "greedy", str(tmp_path / "nope.occ"))[0] == EXIT_USAGE


def test_run_greedy_all_positive(capsys, tmp_path):
    path = tmp_path / "ap.occ"
    save_instance(gen_all_positive(3), path)
    code, out, _ = run_cli(capsys, "run", "greedy", str(path))
    rep = ExperimentReport.from_text(out)
    assert code == EXIT_OK
    assert rep.ratio == 1.0 and rep.oracle_exact and rep.profit == 15


def test_run_greedy_two_clique(capsys, tmp_path):
    path = tmp_path / "tc.occ"
    main(["gen", "two-clique", "--m", "3", "--k", "1", "--out", str(path)])
    capsys.readouterr()
    code, out, _ = run_cli(capsys, "run", "greedy", str(path))
    rep = ExperimentReport.from_text(out)
    assert (rep.cost, rep.oracle_cost, rep.cost_ratio) == (4, 1, 4.0)
    assert rep.clusters == ["0 1", "2 3", "4 5"]


def test_run_dense_planted(capsys, tmp_path, relaxed):
    path = tmp_path / "pl.occ"
    save_instance(gen_planted(2, 5, 0.0, seed=3), path)
    code, out, _ = run_cli(capsys, "run", "dense", str(path), "--config", relaxed)
    rep = ExperimentReport.from_text(out)
    assert code == EXIT_OK
    assert rep.ratio == 1.0
    assert rep.config == RELAXED_TEXT.strip().splitlines()
    assert rep.updates  # one diagnostics line per update time
    assert all(u.startswith("t=") for u in rep.updates)


def test_run_mixed_records_branch(capsys, tmp_path, relaxed):
    path = tmp_path / "pl.occ"
    save_instance(gen_planted(2, 3, 0.0, seed=3), path)
    cfg = tmp_path / "mix.cfg"
    cfg.write_text(RELAXED_TEXT + "p = 1\n")
    code, out, _ = run_cli(capsys, "run", "mixed", str(path), "--config", str(cfg))
    assert ExperimentReport.from_text(out).branch == "dense"


def test_report_is_self_contained(capsys, tmp_path, relaxed):
    path = tmp_path / "pl.occ"
    save_instance(gen_planted(3, 3, 0.1, seed=8), path)
    first = tmp_path / "first.txt"
    assert run_cli(capsys, "run", "mixed", str(path), "--config", relaxed, "--seed", "5",
                   "--out", str(first))[0] == EXIT_OK
    path.unlink()
    second = tmp_path / "second.txt"
    assert run_cli(capsys, "run", "mixed", "--from-report", str(first), "--out", str(second))[0] == EXIT_OK
    a = ExperimentReport.from_text(first.read_text())
    b = ExperimentReport.from_text(second.read_text())
    assert (a.profit, a.cost, a.oracle_profit, a.branch, a.seed, a.clusters) == \
        (b.profit, b.cost, b.oracle_profit, b.branch, b.seed, b.clusters)
    assert a.config == b.config


def test_report_round_trip_and_tamper(capsys, tmp_path):
    path = tmp_path / "ap.occ"
    save_instance(gen_all_positive(2), path)
    _, out, _ = run_cli(capsys, "run", "greedy", str(path))
    rep = ExperimentReport.from_text(out)
    assert rep.to_text() == out
    with pytest.raises(ReportFormatError):
        ExperimentReport.from_text(out.replace("ratio: 1.0", "ratio: 0.5"))
    with pytest.raises(ReportFormatError):
        ExperimentReport.from_text("not a report\n")


def test_csv_report(capsys, tmp_path):
    reports = tmp_path / "reports"
    reports.mkdir()
    code, out, _ = run_cli(capsys, "report", str(reports))
    assert code == EXIT_OK
    header = "instance,algorithm,n,profit,opt_profit,ratio,cost,opt_cost,cost_ratio,seed,ms\n"
    assert out == header
    inst = tmp_path / "g.occ"
    save_instance(gen_planted(2, 4, 0.2, seed=2), inst)
    for name in ("a.txt", "b.txt"):
        alg = "greedy" if name == "a.txt" else "dense"
        run_cli(capsys, "run", alg, str(inst), "--out", str(reports / name))
    (reports / "junk.txt").write_text("garbage\n")
    code, out, _ = run_cli(capsys, "report", str(reports))
    rows = list(csv.DictReader(io.StringIO(out)))
    assert out.startswith(header)
    assert [r["algorithm"] for r in rows] == ["greedy", "dense"]
    for r in rows:
        assert round(float(r["ratio"]), 12) == round(int(r["profit"]) / int(r["opt_profit"]), 12)
        assert float(r["cost_ratio"]) == int(r["cost"]) / max(1, int(r["opt_cost"]))
    assert csv_table(reports) == out


def test_report_needs_directory(capsys, tmp_path):
    assert run_cli(capsys, "report", str(tmp_path / "missing"))[0] == EXIT_USAGE


def test_verify_pass(capsys):
    code, out, _ = run_cli(capsys, "verify", "greedy-half", "--count", "40")
    assert code == EXIT_OK and out.startswith("PASS greedy-half")


def test_verify_oracle_bell(capsys):
    code, out, _ = run_cli(capsys, "verify", "oracle-bell", "--count", "30")
    assert code == EXIT_OK and "PASS oracle-bell" in out


def test_verify_failure_exit_code(capsys, monkeypatch):
    from occlust import cli
    from occlust.experiments import Failure, SuiteResult

    def broken(**_):
        return SuiteResult("greedy-half", 1, [Failure("x", gen_all_positive(1), "planted")])
    monkeypatch.setitem(cli.SUITES, "greedy-half", broken)
    code, out, _ = run_cli(capsys, "verify", "greedy-half")
    assert code == EXIT_FAIL
    assert "FAIL greedy-half" in out and "2\n+\n" in out


def test_search_random(capsys, tmp_path):
    out_path = tmp_path / "worst.txt"
    code, _, err = run_cli(capsys, "search", "greedy", "--n", "7", "--trials", "60", "--out", str(out_path))
    assert code == EXIT_OK
    rep = ExperimentReport.from_text(out_path.read_text())
    assert rep.oracle_exact and 0.5 <= rep.ratio <= 1.0
    assert read_instance((tmp_path / "worst.occ").read_bytes()).n == 7


def test_search_two_clique_sweep(capsys):
    code, out, _ = run_cli(capsys, "search", "greedy", "--family", "two-clique", "--m-min", "3", "--m-max", "5")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == EXIT_OK
    assert [int(r["cost_alg"]) for r in rows] == [4, 6, 8]
    assert all(int(r["cost_alg"]) >= int(r["n_minus_1_minus_opt"]) for r in rows)


def test_search_yao(capsys):
    code, out, _ = run_cli(capsys, "search", "greedy", "--family", "yao", "--n", "6", "--q", "0", "1")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == EXIT_OK
    assert [r["q"] for r in rows] == ["0.0"] * 3 + ["1.0"] * 3
    # Greedy solves both the all-positive prefix and the gadget optimally
    assert all(float(r["expected_ratio"]) == 1.0 for r in rows if r["algorithm"].startswith("greedy"))


def test_config_block_parsing():
    block = parse_config_block("# relaxed\nalpha = 0.01\ntau: 1.1\n\nt_min = 4  # small\n")
    assert block == {"alpha": "0.01", "tau": "1.1", "t_min": "4"}
    cfg = dense_config_from(block)
    assert (cfg.alpha, cfg.tau, cfg.t_min, cfg.k2) == (0.01, 1.1, 4, 10)
    with pytest.raises(ValueError):
        parse_config_block("alpha 0.01\n")
    with pytest.raises(ValueError):
        parse_config_block("beta = 2\n")


def test_bad_config_file(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("gamma = 1\n")
    inst = tmp_path / "a.occ"
    save_instance(gen_all_positive(1), inst)
    assert run_cli(capsys, "run", "dense", str(inst), "--config", str(cfg))[0] == EXIT_USAGE


def test_global_flags_before_subcommand(capsys):
    code, out, _ = run_cli(capsys, "--seed", "4", "gen", "random", "--n", "5")
    assert code == EXIT_OK
    _, again, _ = run_cli(capsys, "gen", "random", "--n", "5", "--seed", "4")
    assert out == again
    assert read_instance(out).num_edges == math.comb(5, 2)
