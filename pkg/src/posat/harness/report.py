"""Per-family tables and cactus series from benchmark rows."""

from __future__ import annotations

import csv
from collections import defaultdict
from typing import Iterable, Optional

from posat.harness.bench import BenchRow

METRICS = {"time": "wall_time", "checks": "clause_checks"}

SUMMARY_COLUMNS = [
    "family",
    "config",
    "#inst",
    "#to",
    "time",
    "checks",
    "conflicts",
    "undos/conflict",
    "checks/conflict",
    "multi_candidate_pct",
    "saved_pct",
]


def metric_value(row: BenchRow, metric: str) -> float:
    if metric == "time":
        return row.wall_time
    if metric == "checks":
        return row.stats.clause_checks
    raise ValueError(f"unknown metric {metric!r}")


def _timeout_checks(rows: list[BenchRow]) -> dict[tuple[str, str], int]:
    """Checks charged to each timed-out run.

    When several configurations time out on one instance they are all
    charged the smallest count among them.
    """
    by_instance = defaultdict(list)
    for row in rows:
        if row.timeout:
            by_instance[(row.family, row.instance)].append(row)
    charged = {}
    for (_, instance), group in by_instance.items():
        low = min(r.stats.clause_checks for r in group)
        for r in group:
            charged[(instance, r.config)] = low
    return charged


def summarize(rows: Iterable[BenchRow]) -> list[dict]:
    """Aggregate per (family, config) plus a ``total`` row per config.

    Ratios are pooled: total undone over total conflicts, and likewise for
    clause checks.
    """
    rows = list(rows)
    charged = _timeout_checks(rows)
    groups: dict[tuple[str, str], list[BenchRow]] = defaultdict(list)
    configs: list[str] = []
    families: list[str] = []
    for row in rows:
        groups[(row.family, row.config)].append(row)
        groups[("total", row.config)].append(row)
        if row.config not in configs:
            configs.append(row.config)
        if row.family not in families:
            families.append(row.family)
    table = []
    for family in sorted(families) + ["total"]:
        for config in configs:
            group = groups.get((family, config))
            if not group:
                continue
            conflicts = sum(r.stats.conflicts for r in group)
            undone = sum(r.stats.undone_total for r in group)
            raw_checks = sum(r.stats.clause_checks for r in group)
            checks = sum(charged.get((r.instance, r.config), r.stats.clause_checks) for r in group)
            multi = sum(r.stats.conflicts_multi_candidate for r in group)
            saved = sum(r.stats.locally_saved_total for r in group)
            table.append(
                {
                    "family": family,
                    "config": config,
                    "#inst": len(group),
                    "#to": sum(r.timeout for r in group),
                    "time": round(sum(r.wall_time for r in group), 6),
                    "checks": checks,
                    "conflicts": conflicts,
                    "undos/conflict": round(undone / conflicts, 4) if conflicts else 0.0,
                    "checks/conflict": round(raw_checks / conflicts, 4) if conflicts else 0.0,
                    "multi_candidate_pct": round(100 * multi / conflicts, 2) if conflicts else 0.0,
                    "saved_pct": round(100 * saved / (saved + undone), 2) if saved + undone else 0.0,
                }
            )
    return table


def cactus_series(
    rows: Iterable[BenchRow], metric: str = "time", split_sat: bool = False
) -> dict[tuple[str, str], list[tuple[int, float]]]:
    """(k, metric of the k-th cheapest solved instance) per config.

    Unsolved runs (timeouts, errors, unknown) are left out. With
    ``split_sat`` the series are keyed by (config, "SAT"/"UNSAT"),
    otherwise by (config, "ALL").
    """
    buckets: dict[tuple[str, str], list[float]] = defaultdict(list)
    order: list[tuple[str, str]] = []
    for row in rows:
        if not row.solved:
            continue
        key = (row.config, row.verdict if split_sat else "ALL")
        if key not in buckets:
            order.append(key)
        buckets[key].append(metric_value(row, metric))
    return {key: list(enumerate(sorted(buckets[key]), start=1)) for key in order}


def write_series(series: dict, path, metric: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["config", "verdict", "k", metric])
        for (config, verdict), points in series.items():
            for k, value in points:
                writer.writerow([config, verdict, k, value])


def write_summary(table: list[dict], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SUMMARY_COLUMNS)
        writer.writeheader()
        writer.writerows(table)


def format_summary(table: list[dict], columns: Optional[list[str]] = None) -> str:
    """Fixed-width text rendering, one line per (family, config)."""
    columns = columns or SUMMARY_COLUMNS
    cells = [columns] + [[str(r[c]) for c in columns] for r in table]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    return "\n".join("  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells) + "\n"
