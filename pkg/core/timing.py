"""Earliest-start timing of a fixed sequencing decision.

Every completion time is non-decreasing in every start time, so starting each
batch and job as early as the variation allows is optimal for the TWCT of a
given sequencing.
"""

from typing import List, Optional, Sequence, Tuple

from common.models import (
    Initiation,
    Instance,
    Preemption,
    Schedule,
    ScheduledJob,
    TimedBatch,
    VariationConfig,
)

Sequencing = Sequence[Sequence[Sequence[int]]]


def batch_start(
    ready: int,
    releases: Sequence[int],
    processings: Sequence[int],
    var: VariationConfig,
) -> int:
    """Earliest start of a batch whose machine becomes ready (setup included) at `ready`"""
    start = ready
    if var.preemption is Preemption.FORBIDDEN:
        offset = 0
        for release, processing in zip(releases, processings):
            start = max(start, release - offset)
            offset += processing
    if var.initiation is Initiation.COMPLETE:
        start = max(start, max(releases))
    return start


def time_batch(
    ready: int,
    releases: Sequence[int],
    processings: Sequence[int],
    var: VariationConfig,
) -> Tuple[List[int], int]:
    """Job starts and end of one batch"""
    cursor = batch_start(ready, releases, processings, var)
    starts = []
    for release, processing in zip(releases, processings):
        begin = max(release, cursor)
        starts.append(begin)
        cursor = begin + processing
    return starts, cursor


def time_machine(
    inst: Instance, batches: Sequence[Sequence[int]], var: VariationConfig
) -> List[Tuple[int, List[int], int]]:
    """(family, job starts, end) for each batch of one machine"""
    timed = []
    previous: Optional[int] = None
    end = 0
    for batch in batches:
        if not batch:
            raise ValueError("empty batch in sequencing")
        jobs = [inst.job(job_id) for job_id in batch]
        family = jobs[0].family
        if any(job.family != family for job in jobs):
            raise ValueError(f"batch {list(batch)} mixes families")
        ready = end + inst.setups.between(previous, family)
        starts, end = time_batch(
            ready, [job.release for job in jobs], [job.processing for job in jobs], var
        )
        timed.append((family, starts, end))
        previous = family
    return timed


def left_shift_timing(inst: Instance, seq: Sequencing, var: VariationConfig) -> Schedule:
    """Time a per-machine sequencing of family-pure batches as early as possible"""
    if len(seq) > inst.num_machines:
        raise ValueError(f"{len(seq)} machine sequences for {inst.num_machines} machines")
    lanes = []
    for batches in seq:
        lane = []
        for batch, (family, starts, end) in zip(batches, time_machine(inst, batches, var)):
            lane.append(
                TimedBatch(
                    family=family,
                    jobs=tuple(
                        ScheduledJob(id=job_id, start=start)
                        for job_id, start in zip(batch, starts)
                    ),
                    start=starts[0],
                    end=end,
                )
            )
        lanes.append(tuple(lane))
    while len(lanes) < inst.num_machines:
        lanes.append(())
    return Schedule(machines=tuple(lanes))


def sequencing_twct(inst: Instance, seq: Sequencing, var: VariationConfig) -> int:
    """TWCT of the left-shifted timing without building a Schedule"""
    total = 0
    for batches in seq:
        for batch, (_, starts, end) in zip(batches, time_machine(inst, batches, var)):
            for job_id, start in zip(batch, starts):
                job = inst.job(job_id)
                completion = start + job.processing if var.item else end
                total += job.weight * completion
    return total
