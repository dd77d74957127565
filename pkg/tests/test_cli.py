import json
import subprocess
import sys

import pytest

from posat.cli import build_parser, main
from posat.dimacs import format_cnf
from posat.generators import pigeonhole
from posat.stats import STAT_FIELDS


@pytest.fixture
def cnf(tmp_path):
    def write(text, name="f.cnf"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


def test_sat_exit_and_output(cnf, capsys):
    path = cnf("p cnf 2 2\n1 -2 0\n2 0\n")
    assert main(["solve", path, "--verify"]) == 10
    out = capsys.readouterr().out
    assert "s SATISFIABLE\nv 1 2 0\n" in out
    assert all(line[0] in "csv" for line in out.splitlines())


def test_unsat_exit(cnf, capsys):
    path = cnf(format_cnf(pigeonhole(4, 3)))
    assert main(["solve", path, "--order", "total", "--phase-saving", "on"]) == 20
    assert capsys.readouterr().out.endswith("s UNSATISFIABLE\n")


def test_budget_exit(cnf, capsys):
    path = cnf(format_cnf(pigeonhole(7, 6)))
    assert main(["solve", path, "--conflict-budget", "3"]) == 0
    out = capsys.readouterr().out
    assert "c stopped: budget-exhausted" in out and out.endswith("s UNKNOWN\n")


def test_stats_json_has_every_field(cnf, tmp_path, capsys):
    path = cnf(format_cnf(pigeonhole(4, 3)))
    stats = tmp_path / "s.json"
    main(["solve", path, "--stats-out", str(stats)])
    data = json.loads(stats.read_text())
    assert list(data) == STAT_FIELDS
    assert data["conflicts"] > 0


def exit_code(argv):
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "/nonexistent.cnf"],
        ["solve", "BAD"],
        ["solve", "OK", "--heuristic", "coin-flip"],
        ["solve", "OK", "--phase-saving", "maybe"],
        ["bench", "/nonexistent"],
        ["bench", "DIR", "--configs", "nope"],
        ["report", "/nonexistent.csv"],
    ],
)
def test_failures_exit_1(argv, cnf, tmp_path, capsys):
    replace = {"BAD": cnf("p cnf 1 1\n2 0\n", "bad.cnf"), "OK": cnf("p cnf 1 0\n", "ok.cnf"),
               "DIR": str(tmp_path)}
    assert exit_code([replace.get(a, a) for a in argv]) == 1
    assert capsys.readouterr().err


def test_usage_errors_exit_1():
    with pytest.raises(SystemExit) as info:
        build_parser().parse_args(["solve", "f", "--order", "diagonal"])
    assert info.value.code == 1


def test_flag_mapping(monkeypatch, cnf, capsys):
    seen = {}

    import posat.cli as cli

    class Spy(cli.Solver):
        def __init__(self, formula, config):
            seen["config"] = config
            super().__init__(formula, config)

    monkeypatch.setattr(cli, "Solver", Spy)
    path = cnf("p cnf 1 1\n1 0\n")
    main(["solve", path, "--order", "partial", "--heuristic", "most-deps", "--restarts", "luby",
          "--minimize", "off", "--matrix-threshold", "7", "--deps-existing", "direct", "--seed", "4"])
    c = seen["config"]
    assert (c.order, c.heuristic.value, c.restarts, c.minimize) == ("partial", "most-deps", "luby", False)
    assert (c.matrix_threshold, c.deps_existing, c.seed) == (7, "direct", 4)


def test_bench_report_pipeline(tmp_path, capsys):
    corpus = tmp_path / "corpus"
    assert main(["gen-corpus", str(corpus), "--size", "tiny", "--seed", "2"]) == 0
    out = tmp_path / "results.csv"
    assert main(["bench", str(corpus), "--configs", "TO,PO", "--timeout", "30", "--out", str(out)]) == 0
    printed = capsys.readouterr().out
    assert "#to" in printed and "checks/conflict" in printed
    summary = out.with_suffix(".summary.csv").read_text().splitlines()
    assert summary[0].split(",")[:5] == ["family", "config", "#inst", "#to", "time"]
    cactus = tmp_path / "cactus.csv"
    assert main(["report", str(out), "--metric", "checks", "--split-sat", "--out", str(cactus)]) == 0
    assert cactus.read_text().startswith("config,verdict,k,checks")
    assert cactus.with_suffix(".svg").exists()


def test_console_script_stdin(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "posat.cli", "solve", "-"],
        input="p cnf 2 4\n1 2 0\n-1 2 0\n1 -2 0\n-1 -2 0\n",
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 20
    assert proc.stdout.endswith("s UNSATISFIABLE\n")
