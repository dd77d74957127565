"""Run every (instance, configuration) pair and record one CSV row each."""

from __future__ import annotations

import csv
import logging
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from posat.dimacs import UNKNOWN, parse_cnf
from posat.engine import Solver, SolverConfig
from posat.stats import STAT_FIELDS, SolveStats

log = logging.getLogger(__name__)

CSV_VERSION = "posat-bench-csv v1"
CSV_HEADER_COMMENT = (
    f"# {CSV_VERSION}; timed-out runs report wall_time = limit and count at the limit in time totals"
)

PRESETS = {
    "TO": dict(order="total", phase_saving=False),
    "TO-phase": dict(order="total", phase_saving=True),
    "PO": dict(order="partial", heuristic="chrono"),
    "PO-least-undos": dict(order="partial", heuristic="least-undos"),
    "PO-most-undos": dict(order="partial", heuristic="most-undos"),
    "PO-least-deps": dict(order="partial", heuristic="least-deps"),
    "PO-most-deps": dict(order="partial", heuristic="most-deps"),
}

# custom entries use CLI flag spellings: LABEL:order=partial:heuristic=most-deps
_KEYS = {
    "order": ("order", str),
    "heuristic": ("heuristic", str),
    "phase-saving": ("phase_saving", lambda s: s == "on"),
    "restarts": ("restarts", str),
    "minimize": ("minimize", lambda s: s == "on"),
    "matrix-threshold": ("matrix_threshold", int),
    "seed": ("seed", int),
    "conflict-budget": ("conflict_budget", int),
}


def parse_configs(spec: str) -> dict[str, dict]:
    """Turn ``TO,PO,mine:order=partial:heuristic=least-deps`` into labelled option dicts.

    ``all`` expands to every preset.
    """
    configs: dict[str, dict] = {}
    for entry in filter(None, (e.strip() for e in spec.split(","))):
        if entry == "all":
            configs.update(PRESETS)
            continue
        label, *assignments = entry.split(":")
        if not assignments:
            if label not in PRESETS:
                raise ValueError(f"unknown configuration {label!r}; presets: {', '.join(PRESETS)}")
            configs[label] = dict(PRESETS[label])
            continue
        options = {}
        for assignment in assignments:
            key, _, value = assignment.partition("=")
            if key not in _KEYS or not value:
                raise ValueError(f"bad option {assignment!r} in configuration {label!r}")
            name, convert = _KEYS[key]
            options[name] = convert(value)
        SolverConfig(**options)  # validate early
        configs[label] = options
    if not configs:
        raise ValueError("empty configuration list")
    return configs


def family_of(path: Path, root: Path) -> str:
    rel = path.relative_to(root)
    if len(rel.parts) > 1:
        return rel.parts[0]
    return re.sub(r"[-_.]?\d+$", "", path.stem) or path.stem


@dataclass
class BenchRow:
    instance: str
    family: str
    config: str
    verdict: str
    timeout: bool = False
    error: str = ""
    wall_time: float = 0.0
    stats: SolveStats = field(default_factory=SolveStats)

    # wall_time is the reported time (the limit for timeouts); solve_time is
    # what the solver measured, kept so the stats round-trip exactly
    COLUMNS = ["instance", "family", "config", "verdict", "timeout", "error", "wall_time"] + [
        f for f in STAT_FIELDS if f != "wall_time"
    ] + ["solve_time"]

    def to_record(self) -> dict:
        record = {
            "instance": self.instance,
            "family": self.family,
            "config": self.config,
            "verdict": self.verdict,
            "timeout": int(self.timeout),
            "error": self.error,
            "wall_time": repr(float(self.wall_time)),
        }
        for name, value in self.stats.to_dict().items():
            if name != "wall_time":
                record[name] = value
        record["solve_time"] = repr(float(self.stats.wall_time))
        return record

    @classmethod
    def from_record(cls, record: dict) -> "BenchRow":
        stats = SolveStats.from_dict({**record, "wall_time": record["solve_time"]})
        return cls(
            instance=record["instance"],
            family=record["family"],
            config=record["config"],
            verdict=record["verdict"],
            timeout=record["timeout"] in ("1", "True", "true"),
            error=record.get("error", ""),
            wall_time=float(record["wall_time"]),
            stats=stats,
        )

    @property
    def solved(self) -> bool:
        return not self.timeout and not self.error and self.verdict in ("SAT", "UNSAT")


def run_one(path: str, family: str, label: str, options: dict, timeout: Optional[float]) -> BenchRow:
    name = Path(path).name
    try:
        with open(path, "rb") as fh:
            formula = parse_cnf(fh)
    except (OSError, ValueError) as exc:
        return BenchRow(name, family, label, "ERROR", error=str(exc))
    solver = Solver(formula, SolverConfig(**options))
    verdict = solver.solve(timeout=timeout)
    stats = solver.stats
    timed_out = verdict.status == UNKNOWN and verdict.reason == "interrupted"
    wall = timeout if timed_out else stats.wall_time
    return BenchRow(name, family, label, verdict.status, timed_out, "", wall, stats)


def _star(args):
    return run_one(*args)


def find_instances(directory) -> list[tuple[Path, str]]:
    root = Path(directory)
    paths = sorted(p for p in root.rglob("*.cnf") if p.is_file())
    return [(p, family_of(p, root)) for p in paths]


def run_bench(
    instances: Iterable[tuple[Path, str]],
    configs: dict[str, dict],
    timeout: Optional[float] = None,
    workers: int = 1,
) -> list[BenchRow]:
    """One row per (instance, config), ordered by instance then config."""
    jobs = [
        (str(path), family, label, options, timeout)
        for path, family in instances
        for label, options in configs.items()
    ]
    if workers <= 1:
        rows = []
        for job in jobs:
            rows.append(run_one(*job))
            log.info("%s %s %s %.3fs", job[0], job[2], rows[-1].verdict, rows[-1].wall_time)
        return rows
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_star, jobs))


def write_rows(rows: Iterable[BenchRow], path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(CSV_HEADER_COMMENT + "\n")
        writer = csv.DictWriter(fh, fieldnames=BenchRow.COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row.to_record())


def read_rows(path) -> list[BenchRow]:
    with open(path, newline="") as fh:
        lines = [line for line in fh if not line.startswith("#")]
    reader = csv.DictReader(lines)
    missing = set(BenchRow.COLUMNS) - set(reader.fieldnames or [])
    if missing:
        raise ValueError(f"{path}: missing columns {sorted(missing)}")
    rows = []
    for lineno, record in enumerate(reader, start=2):
        try:
            rows.append(BenchRow.from_record(record))
        except (KeyError, ValueError) as exc:
            raise ValueError(f"{path}: malformed row {lineno}: {exc}") from None
    return rows
