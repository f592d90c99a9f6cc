"""Run solver configurations over an instance suite and write CSV reports."""

import asyncio
import csv
import json
import re
from pathlib import Path
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union
from uuid import uuid4

from pydantic import BaseModel, ConfigDict

from bench.metrics import (
    BenchRow,
    CurvePoint,
    GapRow,
    PairRow,
    aggregate_gaps,
    improvement_curve,
    pairwise,
    sample_times,
    with_gaps,
)
from common.config import settings
from common.logging_config import RunLogger, setup_logging
from common.metrics import bench_rows_total
from common.models import Instance, ModelVariant, SolverConfig, VariationConfig
from core.io import load_instance
from solver.search import solve

logger = setup_logging("bench", settings.log_level)

ROW_COLUMNS = [
    "instance",
    "instance_class",
    "config",
    "status",
    "objective",
    "lower_bound",
    "nodes",
    "elapsed",
    "gap",
    "trace_file",
    "error",
]


class BenchConfig(BaseModel):
    """A named solver configuration"""

    model_config = ConfigDict(frozen=True)

    name: str
    solver: SolverConfig


def parse_config(text: str, time_limit: float, workers: int = 1) -> BenchConfig:
    """Parse `<model>[+sb][+sbt][:variation]`, e.g. `h+sbt:bc` or `ia+sb:ipf`"""
    head, _, variation = text.partition(":")
    parts = head.lower().split("+")
    options = set(parts[1:])
    unknown = options - {"sb", "sbt", "nodom"}
    if unknown:
        raise ValueError(f"unknown options {sorted(unknown)} in {text!r}")
    solver = SolverConfig(
        model_variant=ModelVariant(parts[0]),
        variation=VariationConfig.parse(variation or "ipf"),
        sb="sb" in options,
        sbt="sbt" in options,
        dominance="nodom" not in options,
        time_limit=time_limit,
        workers=workers,
    )
    return BenchConfig(name=text, solver=solver)


class SuiteEntry(NamedTuple):
    name: str
    instance: Instance


def load_suite(directory: Union[str, Path]) -> List[SuiteEntry]:
    """Every instance file of a directory, by file name; the manifest is skipped"""
    paths = sorted(p for p in Path(directory).glob("*.json") if p.name != "manifest.json")
    return [SuiteEntry(path.stem, load_instance(path)) for path in paths]


def instance_class(inst: Instance) -> str:
    return f"j{len(inst.jobs)}_f{inst.num_families}_m{inst.num_machines}"


class BenchReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    rows: Tuple[BenchRow, ...]
    gaps: Tuple[GapRow, ...]
    pairs: Tuple[PairRow, ...]
    curve: Tuple[CurvePoint, ...]
    files: Tuple[str, ...] = ()


def _slug(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "-", text)


class MatrixRunner:
    """Runs rows concurrently in worker threads, up to a cap"""

    def __init__(self, out_dir: Optional[Path], workers: int):
        self.out_dir = out_dir
        self.semaphore = asyncio.Semaphore(workers)
        self.logger = logger

    async def run_row(self, entry: SuiteEntry, config: BenchConfig) -> BenchRow:
        async with self.semaphore:
            row_id = str(uuid4())
            row_log = RunLogger(self.logger, row_id)
            base = {
                "instance": entry.name,
                "instance_class": instance_class(entry.instance),
                "config": config.name,
            }
            try:
                row_log.info("Row started", extra=base)
                result = await asyncio.to_thread(solve, entry.instance, config.solver, row_id)
                trace_file = ""
                if self.out_dir is not None:
                    trace_path = (
                        self.out_dir / "traces" / f"{_slug(entry.name)}__{_slug(config.name)}.json"
                    )
                    trace_path.write_text(json.dumps(result.to_document(), indent=2))
                    trace_file = str(trace_path.relative_to(self.out_dir))
                bench_rows_total.labels(outcome=result.status.value).inc()
                row_log.info(
                    "Row finished",
                    extra={**base, "status": result.status.value, "objective": result.objective},
                )
                return BenchRow(
                    **base,
                    status=result.status.value,
                    objective=result.objective,
                    lower_bound=result.lower_bound,
                    nodes=result.nodes,
                    elapsed=result.elapsed,
                    trace_file=trace_file,
                    trace=result.trace,
                )
            except Exception as e:
                bench_rows_total.labels(outcome="error").inc()
                row_log.error(
                    f"Row failed: {str(e)}", extra=base, exc_info=True
                )
                return BenchRow(**base, status="error", error=f"{type(e).__name__}: {e}")


def _write_csv(path: Path, columns: Sequence[str], records: Sequence[Dict]) -> None:
    with path.open("w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=list(columns))
        writer.writeheader()
        for record in records:
            writer.writerow({key: "" if record[key] is None else record[key] for key in columns})


def write_reports(report: BenchReport, out_dir: Path) -> List[Path]:
    rows_path = out_dir / "rows.csv"
    _write_csv(rows_path, ROW_COLUMNS, [row.model_dump() for row in report.rows])
    gaps_path = out_dir / "gaps.csv"
    _write_csv(gaps_path, list(GapRow.model_fields), [g.model_dump() for g in report.gaps])
    pairs_path = out_dir / "pairwise.csv"
    _write_csv(pairs_path, list(PairRow.model_fields), [p.model_dump() for p in report.pairs])
    curve_path = out_dir / "curve.csv"
    _write_csv(curve_path, list(CurvePoint.model_fields), [c.model_dump() for c in report.curve])
    return [rows_path, gaps_path, pairs_path, curve_path]


async def run_matrix(
    suite: Sequence[SuiteEntry],
    configs: Sequence[BenchConfig],
    budget: Optional[float] = None,
    out_dir: Optional[Union[str, Path]] = None,
    workers: Optional[int] = None,
    reference: Optional[str] = None,
    curve_step: float = 60.0,
) -> BenchReport:
    """Solve every (instance, config) pair and aggregate.

    `budget` overrides each config's time limit. Failed rows are kept with their
    error and do not stop the run. The improvement curve compares every config
    with `reference` (the first config by default), sampled every `curve_step`
    seconds up to the budget.
    """
    if budget is not None:
        configs = [
            c.model_copy(update={"solver": c.solver.model_copy(update={"time_limit": budget})})
            for c in configs
        ]
    out = Path(out_dir) if out_dir is not None else None
    if out is not None:
        (out / "traces").mkdir(parents=True, exist_ok=True)

    runner = MatrixRunner(out, workers or settings.bench_workers)
    logger.info(
        "Starting bench matrix",
        extra={"instances": len(suite), "configs": [c.name for c in configs]},
    )
    outcomes = await asyncio.gather(
        *(runner.run_row(entry, config) for entry in suite for config in configs),
        return_exceptions=True,
    )
    rows = []
    for outcome in outcomes:
        if isinstance(outcome, BaseException):
            logger.error(f"Unexpected bench failure: {outcome!r}")
            continue
        rows.append(outcome)
    rows = with_gaps(rows)

    names = [c.name for c in configs]
    horizon = budget if budget is not None else max(
        (c.solver.time_limit for c in configs), default=curve_step
    )
    report = BenchReport(
        rows=tuple(rows),
        gaps=tuple(aggregate_gaps(rows)),
        pairs=tuple(pairwise(rows, names)),
        curve=tuple(
            improvement_curve(rows, reference or names[0], sample_times(horizon, curve_step))
        )
        if names
        else (),
    )
    if out is not None:
        files = write_reports(report, out)
        report = report.model_copy(update={"files": tuple(str(f) for f in files)})
    return report
