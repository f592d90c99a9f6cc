from prometheus_client import Counter, Histogram, start_http_server

# Counters
solver_nodes_total = Counter(
    "solver_nodes_total", "Search nodes expanded by the branch and bound", ["model"]
)

solver_incumbents_total = Counter(
    "solver_incumbents_total", "Incumbent improvements found", ["model"]
)

solver_runs_total = Counter(
    "solver_runs_total", "Finished solver runs", ["model", "status"]
)

genins_instances_total = Counter(
    "genins_instances_total", "Instances produced by the generator"
)

genins_setup_restarts_total = Counter(
    "genins_setup_restarts_total",
    "Setup matrices discarded because they came out symmetric",
)

bench_rows_total = Counter(
    "bench_rows_total", "Benchmark rows by outcome", ["outcome"]
)

# Histograms
solver_run_duration = Histogram(
    "solver_run_duration_seconds",
    "Wall clock time of solver runs",
    ["model"],
    buckets=[0.01, 0.1, 1.0, 10.0, 60.0, 600.0, 3600.0],
)


def start_metrics_server(port: int = 8001):
    """Start Prometheus metrics server"""
    start_http_server(port)
