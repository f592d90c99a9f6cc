"""Random instances: triangular setup matrices, release times and derived batch sizes.

Random streams come from numpy's PCG64 generator seeded through
`SeedSequence([seed, *stream])`, so a seed and a stream key always give the
same draws.
"""

import math
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.sparse.csgraph import csgraph_from_dense, shortest_path
from tenacity import RetryError, Retrying, retry_if_exception_type, stop_after_attempt

from common.config import settings
from common.errors import CoreBudgetExceeded, RestartLimit
from common.logging_config import setup_logging
from common.metrics import genins_instances_total, genins_setup_restarts_total
from common.models import (
    BatchSizeBounds,
    Instance,
    Job,
    ModelVariant,
    Schedule,
    SetupMatrix,
    SolverConfig,
    VariationConfig,
)
from solver.search import solve

logger = setup_logging("genins", settings.log_level)


class GenSpec(BaseModel):
    """Size of one generated instance and its seed"""

    model_config = ConfigDict(frozen=True)

    num_jobs: int = Field(ge=1)
    num_families: int = Field(ge=1)
    num_machines: int = Field(ge=1)
    setup_scale: int = Field(default=20, ge=1)
    seed: int = 0

    @model_validator(mode="after")
    def check_families(self):
        if self.num_families > self.num_jobs:
            raise ValueError("num_families must not exceed num_jobs")
        return self

    @property
    def label(self) -> str:
        return (
            f"j{self.num_jobs}_f{self.num_families}_m{self.num_machines}_s{self.setup_scale}"
        )


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """PCG64 stream for (seed, *stream)"""
    return np.random.default_rng(np.random.SeedSequence([seed, *stream]))


class SymmetricSetups(Exception):
    """Drawn setup matrix is symmetric; draw again"""


def _closure(distances: np.ndarray) -> np.ndarray:
    graph = csgraph_from_dense(distances, null_value=np.inf)
    return shortest_path(graph, method="D", directed=True)


def _draw_setups(num_families: int, scale: int, rng: np.random.Generator) -> SetupMatrix:
    nodes = num_families + 1
    weights = rng.uniform(0.0, 1.0, size=(nodes, nodes))
    # node 0 is the idle machine: arcs leave it, none enter it
    weights[:, 0] = np.inf
    np.fill_diagonal(weights, np.inf)
    distances = np.rint(_closure(weights) * scale)
    # rounding can break the triangle inequality; close again until stable
    while True:
        closed = _closure(distances)
        if np.array_equal(closed, distances):
            break
        distances = closed
    inter = distances[1:, 1:].astype(int)
    if num_families >= 2 and np.array_equal(inter, inter.T):
        raise SymmetricSetups()
    return SetupMatrix(
        inter=tuple(tuple(int(v) for v in row) for row in inter),
        initial=tuple(int(v) for v in distances[0, 1:]),
    )


def gen_setup_matrix(
    num_families: int,
    scale: int,
    rng: np.random.Generator,
    seed: Optional[int] = None,
    restart_limit: Optional[int] = None,
) -> SetupMatrix:
    """Shortest-path setup times between families and from the idle machine.

    Arc weights are uniform on [0, 1]; distances are scaled, rounded and closed
    under shortest paths again, so the triangle inequality holds and every entry
    lies in [0, scale]. Symmetric matrices are redrawn.
    """
    if num_families < 1:
        raise ValueError("at least one family is required")
    limit = settings.setup_restart_limit if restart_limit is None else restart_limit

    def count_restart(_state) -> None:
        genins_setup_restarts_total.inc()

    retrying = Retrying(
        stop=stop_after_attempt(limit + 1),
        retry=retry_if_exception_type(SymmetricSetups),
        after=count_restart,
    )
    try:
        return retrying(_draw_setups, num_families, scale, rng)
    except RetryError as exc:
        logger.warning(
            "Setup matrix stayed symmetric",
            extra={"seed": seed, "families": num_families, "attempts": limit},
        )
        raise RestartLimit(seed, limit) from exc


def cmax_lower_bound(jobs: Sequence[Job], num_machines: int, setups: SetupMatrix) -> int:
    """Makespan bound: all work, one longest setup per extra family and one initial setup"""
    families = len(setups.initial)
    total = (
        sum(job.processing for job in jobs)
        + (families - 1) * setups.max_inter
        + setups.max_initial
    )
    return math.ceil(total / num_machines)


def _assign_families(num_jobs: int, num_families: int, rng: np.random.Generator) -> List[int]:
    """Uniform family per job, then fill empty families from the largest ones"""
    families = [int(f) for f in rng.integers(0, num_families, size=num_jobs)]
    for empty in range(num_families):
        if empty in families:
            continue
        counts = np.bincount(families, minlength=num_families)
        donor = int(np.argmax(counts))
        candidates = [j for j, f in enumerate(families) if f == donor]
        families[candidates[int(rng.integers(0, len(candidates)))]] = empty
    return families


def gen_instance(spec: GenSpec, rng: np.random.Generator) -> Instance:
    """Instance without binding batch sizes (min 1, max the family size)"""
    setups = gen_setup_matrix(spec.num_families, spec.setup_scale, rng, seed=spec.seed)
    n = spec.num_jobs
    processing = rng.integers(1, 11, size=n)
    weights = rng.integers(1, 11, size=n)
    families = _assign_families(n, spec.num_families, rng)
    draft = [
        Job(id=j + 1, weight=int(weights[j]), release=0, processing=int(processing[j]), family=families[j])
        for j in range(n)
    ]
    horizon = cmax_lower_bound(draft, spec.num_machines, setups)
    releases = rng.integers(1, horizon + 1, size=n)
    jobs = tuple(job.model_copy(update={"release": int(releases[j])}) for j, job in enumerate(draft))
    sizes = [families.count(f) for f in range(spec.num_families)]
    genins_instances_total.inc()
    return Instance(
        jobs=jobs,
        num_machines=spec.num_machines,
        num_families=spec.num_families,
        setups=setups,
        bounds=BatchSizeBounds(min_size=tuple(1 for _ in sizes), max_size=tuple(sizes)),
    )


def min_run_lengths(inst: Instance, sched: Schedule) -> List[int]:
    """Shortest run of consecutive same-family jobs per family, over all machines"""
    shortest: List[Optional[int]] = [None] * inst.num_families
    for lane in sched.machines:
        runs = []
        for batch in lane:
            if runs and runs[-1][0] == batch.family:
                runs[-1][1] += batch.size
            else:
                runs.append([batch.family, batch.size])
        for family, length in runs:
            if shortest[family] is None or length < shortest[family]:
                shortest[family] = length
    return [
        inst.family_size(f) if length is None else length for f, length in enumerate(shortest)
    ]


def bounds_from_schedule(
    inst: Instance, sched: Schedule, rng: np.random.Generator
) -> BatchSizeBounds:
    """Minimum sizes strictly above the shortest run of the schedule, where possible"""
    lower = []
    for family, run in enumerate(min_run_lengths(inst, sched)):
        size = inst.family_size(family)
        if run + 1 <= size:
            lower.append(int(rng.integers(run + 1, size + 1)))
        else:
            lower.append(size)
    return BatchSizeBounds(
        min_size=tuple(lower),
        max_size=tuple(inst.family_size(f) for f in range(inst.num_families)),
    )


def derive_min_batch_sizes(
    inst: Instance,
    rng: np.random.Generator,
    core_budget: Optional[float] = None,
    node_limit: Optional[int] = None,
) -> BatchSizeBounds:
    """Batch sizes that cut off the schedule found without sizing.

    The sizing-free search is bounded by nodes so that derivation reproduces;
    `core_budget` seconds is an outer guard.
    """
    budget = settings.core_budget_seconds if core_budget is None else core_budget
    nodes = settings.core_node_limit if node_limit is None else node_limit
    cfg = SolverConfig(
        model_variant=ModelVariant.IA,
        variation=VariationConfig.ipf(),
        sizing_enabled=False,
        time_limit=budget,
        node_limit=nodes,
    )
    result = solve(inst, cfg)
    if result.schedule is None:
        raise CoreBudgetExceeded(
            f"no sizing-free schedule within {budget}s and {nodes} nodes"
        )
    bounds = bounds_from_schedule(inst, result.schedule, rng)
    logger.info(
        "Derived minimum batch sizes",
        extra={
            "core_objective": result.objective,
            "core_status": result.status.value,
            "min_size": list(bounds.min_size),
        },
    )
    return bounds
