"""Benchmark runner, result tables and cactus plots."""

from posat.harness.bench import PRESETS, BenchRow, parse_configs, read_rows, run_bench, write_rows
from posat.harness.report import cactus_series, summarize

__all__ = [
    "PRESETS",
    "BenchRow",
    "cactus_series",
    "parse_configs",
    "read_rows",
    "run_bench",
    "summarize",
    "write_rows",
]
