from bench.gantt import gantt_svg
from bench.harness import BenchConfig, load_suite, parse_config, run_matrix
from bench.metrics import improvement_pct, relative_gap

__all__ = [
    "BenchConfig",
    "gantt_svg",
    "improvement_pct",
    "load_suite",
    "parse_config",
    "relative_gap",
    "run_matrix",
]
