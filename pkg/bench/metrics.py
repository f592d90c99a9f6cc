"""Comparison metrics and the aggregate tables built from bench rows."""

import math
from itertools import permutations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from common.errors import NoIncumbent
from common.models import TraceEntry

Z_95 = 1.96


def relative_gap(twct_model: int, twct_best: int) -> float:
    """|model - best| / model; 0 when both are 0"""
    if twct_model == 0:
        if twct_best == 0:
            return 0.0
        raise ZeroDivisionError("relative gap of a zero objective against a nonzero best")
    return abs(twct_model - twct_best) / twct_model


def improvement_pct(twct_mip_t: Optional[int], twct_cp_t: Optional[int]) -> float:
    """Signed improvement of the second value over the first, relative to the first"""
    if twct_mip_t is None or twct_cp_t is None:
        raise NoIncumbent("both sides need an incumbent at this time")
    if twct_mip_t == 0:
        if twct_cp_t == 0:
            return 0.0
        raise ZeroDivisionError("improvement against a zero reference objective")
    return (twct_mip_t - twct_cp_t) / twct_mip_t


def value_at(trace: Sequence[TraceEntry], t: float) -> Optional[int]:
    """Best objective found by time t; the last incumbent carries forward"""
    best = None
    for entry in trace:
        if entry.elapsed > t:
            break
        best = entry.objective
    return best


class BenchRow(BaseModel):
    """Outcome of one (instance, config) run"""

    model_config = ConfigDict(frozen=True)

    instance: str
    instance_class: str
    config: str
    status: str
    objective: Optional[int] = None
    lower_bound: Optional[int] = None
    nodes: int = 0
    elapsed: float = 0.0
    gap: Optional[float] = None
    trace_file: str = ""
    error: str = ""
    trace: Tuple[TraceEntry, ...] = ()


class GapRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    instance_class: str
    config: str
    n: int
    mean_gap: float
    ci_half_width: float


class PairRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    config_a: str
    config_b: str
    n: int
    better_pct: float
    equal_pct: float
    worse_pct: float


class CurvePoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    config: str
    t: float
    mean_improvement: Optional[float]
    coverage: int
    total: int


def best_objectives(rows: Iterable[BenchRow]) -> Dict[str, int]:
    best: Dict[str, int] = {}
    for row in rows:
        if row.objective is None:
            continue
        if row.instance not in best or row.objective < best[row.instance]:
            best[row.instance] = row.objective
    return best


def with_gaps(rows: Sequence[BenchRow]) -> List[BenchRow]:
    """Gap of every row against the best objective of its instance over all configs"""
    best = best_objectives(rows)
    return [
        row.model_copy(update={"gap": relative_gap(row.objective, best[row.instance])})
        if row.objective is not None
        else row
        for row in rows
    ]


def aggregate_gaps(rows: Sequence[BenchRow]) -> List[GapRow]:
    """Mean gap per class and config with a normal 95% interval (1.96 sd / sqrt n)"""
    groups: Dict[Tuple[str, str], List[float]] = {}
    for row in rows:
        if row.gap is not None:
            groups.setdefault((row.instance_class, row.config), []).append(row.gap)
    table = []
    for (cls, config), gaps in sorted(groups.items()):
        values = np.asarray(gaps, dtype=float)
        half = 0.0
        if len(values) > 1:
            half = Z_95 * float(np.std(values, ddof=1)) / math.sqrt(len(values))
        table.append(
            GapRow(
                instance_class=cls,
                config=config,
                n=len(values),
                mean_gap=float(np.mean(values)),
                ci_half_width=half,
            )
        )
    return table


def pairwise(rows: Sequence[BenchRow], configs: Sequence[str]) -> List[PairRow]:
    """Share of instances where config a is better, equal or worse than config b"""
    objective = {(row.instance, row.config): row.objective for row in rows}
    instances = sorted({row.instance for row in rows})
    table = []
    for a, b in permutations(configs, 2):
        better = equal = worse = 0
        for name in instances:
            left = objective.get((name, a))
            right = objective.get((name, b))
            if left is None or right is None:
                continue
            if left < right:
                better += 1
            elif left == right:
                equal += 1
            else:
                worse += 1
        n = better + equal + worse
        scale = 100.0 / n if n else 0.0
        table.append(
            PairRow(
                config_a=a,
                config_b=b,
                n=n,
                better_pct=better * scale,
                equal_pct=equal * scale,
                worse_pct=worse * scale,
            )
        )
    return table


def improvement_curve(
    rows: Sequence[BenchRow], reference: str, times: Sequence[float]
) -> List[CurvePoint]:
    """Mean improvement of each config over the reference config at each sample time.

    Instances where either side has no incumbent yet are left out of the mean and
    counted in `coverage` only when both sides have one.
    """
    traces = {(row.instance, row.config): row.trace for row in rows}
    instances = sorted({row.instance for row in rows})
    configs = sorted({row.config for row in rows} - {reference})
    points = []
    for config in configs:
        for t in times:
            values = []
            for name in instances:
                try:
                    values.append(
                        improvement_pct(
                            value_at(traces.get((name, reference), ()), t),
                            value_at(traces.get((name, config), ()), t),
                        )
                    )
                except NoIncumbent:
                    continue
            points.append(
                CurvePoint(
                    config=config,
                    t=t,
                    mean_improvement=float(np.mean(values)) if values else None,
                    coverage=len(values),
                    total=len(instances),
                )
            )
    return points


def sample_times(budget: float, step: float) -> List[float]:
    """step, 2*step, ... up to and including the budget"""
    count = max(1, int(math.floor(budget / step + 1e-9)))
    times = [step * k for k in range(1, count + 1)]
    if times[-1] < budget:
        times.append(budget)
    return times
