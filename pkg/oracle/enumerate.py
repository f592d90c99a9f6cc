"""Exhaustive enumeration of left-shifted sequencings for tiny instances.

A sequencing assigns every job to one position in one batch on one machine.
Batches are identified by machine and position, so each sequencing is produced
once and timed with the earliest-start rule.
"""

import json
from itertools import permutations
from typing import Iterator, List, Optional, Tuple

from common.config import settings
from common.errors import CapExceeded, InfeasibleInstance, InvalidInstance
from common.logging_config import setup_logging
from common.models import Instance, Schedule, VariationConfig
from core.timing import left_shift_timing, time_batch
from core.validation import can_partition, infeasible_families, structural_violations

logger = setup_logging("oracle", settings.log_level)

Lanes = List[List[Tuple[int, ...]]]


class _Walk:
    """Depth-first walk over machines, then batches of each machine"""

    def __init__(self, inst: Instance, var: VariationConfig, sizing_enabled: bool, canonical: bool):
        self.inst = inst
        self.var = var
        self.canonical = canonical
        n = len(inst.jobs)
        self.lower = [
            inst.bounds.min_size[f] if sizing_enabled else 1 for f in range(inst.num_families)
        ]
        self.upper = [
            inst.bounds.max_size[f] if sizing_enabled else n for f in range(inst.num_families)
        ]
        self.cutoff: Optional[int] = None

    def _partitionable(self, remaining: List[List[int]]) -> bool:
        return all(
            can_partition(len(jobs), self.lower[f], self.upper[f])
            for f, jobs in enumerate(remaining)
        )

    def run(self) -> Iterator[Tuple[Lanes, int]]:
        remaining = [list(members) for members in self.inst.family_members]
        if not self._partitionable(remaining):
            return
        lanes: Lanes = [[] for _ in range(self.inst.num_machines)]
        yield from self._machine(0, lanes, remaining, 0)

    def _machine(self, machine: int, lanes: Lanes, remaining, cost: int):
        if not any(remaining):
            yield [list(lane) for lane in lanes], cost
            return
        if machine >= self.inst.num_machines:
            return
        yield from self._batches(machine, lanes, remaining, cost, 0, None)

    def _batches(self, machine, lanes, remaining, cost, end, previous):
        lane = lanes[machine]
        # close this machine and continue on the next one
        if lane or not self.canonical:
            yield from self._machine(machine + 1, lanes, remaining, cost)
        for family, jobs in enumerate(remaining):
            if not jobs:
                continue
            ready = end + self.inst.setups.between(previous, family)
            for size in range(self.lower[family], min(self.upper[family], len(jobs)) + 1):
                for batch in permutations(jobs, size):
                    if self.canonical and not lane and machine > 0:
                        if batch[0] < self._first_of(lanes[machine - 1]):
                            continue
                    timed = [self.inst.job(job_id) for job_id in batch]
                    starts, batch_end = time_batch(
                        ready,
                        [job.release for job in timed],
                        [job.processing for job in timed],
                        self.var,
                    )
                    added = sum(
                        job.weight * (start + job.processing if self.var.item else batch_end)
                        for job, start in zip(timed, starts)
                    )
                    if self.cutoff is not None and cost + added > self.cutoff:
                        continue
                    rest = [list(other) for other in remaining]
                    rest[family] = [job_id for job_id in jobs if job_id not in batch]
                    if not can_partition(len(rest[family]), self.lower[family], self.upper[family]):
                        continue
                    lane.append(batch)
                    yield from self._batches(
                        machine, lanes, rest, cost + added, batch_end, family
                    )
                    lane.pop()

    @staticmethod
    def _first_of(lane) -> int:
        return lane[0][0]


def _prepare(inst: Instance, job_cap: Optional[int]) -> None:
    cap = settings.oracle_job_cap if job_cap is None else job_cap
    if len(inst.jobs) > cap:
        raise CapExceeded(f"{len(inst.jobs)} jobs exceed the enumeration cap {cap}")
    violations = structural_violations(inst)
    if violations:
        raise InvalidInstance(violations)


def _serialized(schedule: Schedule) -> str:
    return json.dumps(schedule.to_document(), sort_keys=True, separators=(",", ":"))


def enumerate_all_feasible(
    inst: Instance,
    var: VariationConfig,
    sizing_enabled: bool,
    job_cap: Optional[int] = None,
) -> Iterator[Tuple[Schedule, int]]:
    """Every feasible sequencing once, machines labelled, with its objective"""
    _prepare(inst, job_cap)
    walk = _Walk(inst, var, sizing_enabled, canonical=False)
    for lanes, cost in walk.run():
        yield left_shift_timing(inst, lanes, var), cost


def enumerate_optimal(
    inst: Instance,
    var: VariationConfig,
    sizing_enabled: bool,
    job_cap: Optional[int] = None,
) -> Tuple[int, Schedule]:
    """Exact minimum and the optimal schedule with the smallest serialization.

    Machines are interchangeable here: empty machines come last and the first
    jobs of used machines increase.
    """
    _prepare(inst, job_cap)
    if sizing_enabled and infeasible_families(inst):
        raise InfeasibleInstance(infeasible_families(inst))

    walk = _Walk(inst, var, sizing_enabled, canonical=True)
    best: Optional[Tuple[int, str, Schedule]] = None
    candidates = 0
    for lanes, cost in walk.run():
        candidates += 1
        if best is not None and cost > best[0]:
            continue
        schedule = left_shift_timing(inst, lanes, var)
        key = _serialized(schedule)
        if best is None or (cost, key) < (best[0], best[1]):
            best = (cost, key, schedule)
            walk.cutoff = cost
    if best is None:
        raise InfeasibleInstance(infeasible_families(inst))
    logger.debug(
        "Enumeration finished",
        extra={"jobs": len(inst.jobs), "candidates": candidates, "objective": best[0]},
    )
    return best[0], best[2]
