"""Command line entry point: ``posat solve | bench | report | gen-corpus``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from posat.dimacs import SAT, DimacsError, parse_cnf, verify_model, write_result
from posat.engine import Solver, SolverConfig
from posat.heuristics import Heuristic

log = logging.getLogger("posat")


def _on_off(value: str) -> bool:
    if value not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected 'on' or 'off'")
    return value == "on"


def _positive(value: str) -> int:
    n = int(value)
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


class _Parser(argparse.ArgumentParser):
    # usage errors exit 1, like every other failure
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="posat", description="Partial order CDCL SAT solver")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one DIMACS CNF file")
    p.add_argument("file", help="CNF file, '-' for stdin")
    p.add_argument("--order", choices=["total", "partial"], default="partial")
    p.add_argument("--heuristic", choices=[h.value for h in Heuristic], default="chrono")
    p.add_argument("--phase-saving", type=_on_off, default=False, metavar="on|off")
    p.add_argument("--matrix-threshold", type=_positive, default=4096, metavar="N")
    p.add_argument("--restarts", choices=["lbd", "luby", "none"], default="lbd")
    p.add_argument("--minimize", type=_on_off, default=True, metavar="on|off")
    p.add_argument("--deps-existing", choices=["closure", "direct"], default="closure")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--conflict-budget", type=_positive, default=None, metavar="N")
    p.add_argument("--timeout", type=float, default=None, metavar="SECONDS")
    p.add_argument("--stats-out", default=None, metavar="FILE")
    p.add_argument("--verify", action="store_true", help="check the model before printing it")
    p.add_argument("--debug", action="store_true", help="run full invariant checks (slow)")

    b = sub.add_parser("bench", help="run a configuration matrix over a directory of CNF files")
    b.add_argument("dir")
    b.add_argument("--configs", default="all", help="comma list of presets or LABEL:key=value:...")
    b.add_argument("--timeout", type=float, default=60.0, metavar="S")
    b.add_argument("--workers", type=int, default=1, metavar="K")
    b.add_argument("--out", default="results.csv")
    b.add_argument("--summary-out", default=None, help="defaults to <out>.summary.csv")

    r = sub.add_parser("report", help="cactus series, plot and tables from a bench CSV")
    r.add_argument("csv")
    r.add_argument("--metric", choices=["time", "checks"], default="time")
    r.add_argument("--split-sat", action="store_true")
    r.add_argument("--out", default="cactus.csv")
    r.add_argument("--plot", default=None, help="figure path; defaults to <out> with .svg")
    r.add_argument("--no-plot", action="store_true")
    r.add_argument("--summary-out", default=None)

    g = sub.add_parser("gen-corpus", help="write a desk-scale benchmark corpus")
    g.add_argument("dir")
    g.add_argument("--size", choices=["tiny", "small", "medium"], default="small")
    g.add_argument("--seed", type=int, default=0)
    return parser


def cmd_solve(args) -> int:
    try:
        if args.file == "-":
            formula = parse_cnf(sys.stdin.buffer)
        else:
            with open(args.file, "rb") as fh:
                formula = parse_cnf(fh)
    except (OSError, DimacsError) as exc:
        print(f"posat: {exc}", file=sys.stderr)
        return 1
    config = SolverConfig(
        order=args.order,
        heuristic=args.heuristic,
        phase_saving=args.phase_saving,
        matrix_threshold=args.matrix_threshold,
        restarts=args.restarts,
        minimize=args.minimize,
        deps_existing=args.deps_existing,
        seed=args.seed,
        conflict_budget=args.conflict_budget,
        debug=args.debug,
    )
    solver = Solver(formula, config)
    verdict = solver.solve(timeout=args.timeout)
    stats = solver.stats
    if verdict.status == SAT and args.verify and not verify_model(formula, verdict.model):
        print("posat: model verification failed", file=sys.stderr)
        return 1
    out = sys.stdout
    out.write(f"c posat {config.order} order, {config.heuristic} assertion levels\n")
    out.write(
        f"c conflicts {stats.conflicts} decisions {stats.decisions} "
        f"clause_checks {stats.clause_checks} undone {stats.undone_total}\n"
    )
    if verdict.reason:
        out.write(f"c stopped: {verdict.reason}\n")
    out.write(write_result(verdict))
    out.flush()
    if args.stats_out:
        Path(args.stats_out).write_text(stats.to_json())
    return verdict.exit_code


def cmd_bench(args) -> int:
    from posat.harness.bench import find_instances, parse_configs, run_bench, write_rows
    from posat.harness.report import format_summary, summarize, write_summary

    try:
        configs = parse_configs(args.configs)
    except ValueError as exc:
        print(f"posat: {exc}", file=sys.stderr)
        return 1
    if not Path(args.dir).is_dir():
        print(f"posat: {args.dir} is not a directory", file=sys.stderr)
        return 1
    instances = find_instances(args.dir)
    if not instances:
        print(f"posat: no .cnf files under {args.dir}", file=sys.stderr)
        return 1
    rows = run_bench(instances, configs, timeout=args.timeout, workers=args.workers)
    write_rows(rows, args.out)
    table = summarize(rows)
    summary_path = args.summary_out or str(Path(args.out).with_suffix(".summary.csv"))
    write_summary(table, summary_path)
    sys.stdout.write(format_summary(table))
    return 0


def cmd_report(args) -> int:
    from posat.harness.bench import read_rows
    from posat.harness.report import cactus_series, summarize, write_series, write_summary

    try:
        rows = read_rows(args.csv)
    except (OSError, ValueError) as exc:
        print(f"posat: {exc}", file=sys.stderr)
        return 1
    series = cactus_series(rows, args.metric, args.split_sat)
    write_series(series, args.out, args.metric)
    if args.summary_out:
        write_summary(summarize(rows), args.summary_out)
    if not args.no_plot:
        from posat.harness.plotting import cactus_figure

        plot_path = args.plot or str(Path(args.out).with_suffix(".svg"))
        cactus_figure(series, args.metric, plot_path)
    return 0


def cmd_gen_corpus(args) -> int:
    from posat.generators import write_corpus

    paths = write_corpus(args.dir, seed=args.seed, size=args.size)
    print(f"wrote {len(paths)} instances under {args.dir}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="c %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    handler = {
        "solve": cmd_solve,
        "bench": cmd_bench,
        "report": cmd_report,
        "gen-corpus": cmd_gen_corpus,
    }[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
