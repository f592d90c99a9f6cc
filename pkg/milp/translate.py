"""Map timed schedules onto the variables of the two formulations."""

from typing import Dict, List, Tuple

from common.errors import CapacityExceeded
from common.models import Instance, Schedule, TimedBatch
from milp import pa, rp

Assignment = Dict[str, int]


def _zeros(names) -> Assignment:
    return {name: 0 for name in names}


def schedule_to_rp_assignment(inst: Instance, sched: Schedule) -> Assignment:
    """Relative positioning values of a schedule timed with item availability.

    Batches of a family take the family's slots in order of start time. Jobs
    outside a slot get the slot completion of their own processing time and
    unused slots complete at 0.
    """
    model_batches = rp.rp_batches(inst)
    slots: Dict[int, List[int]] = {}
    for batch in model_batches:
        slots.setdefault(batch.family, []).append(batch.index)

    placed: Dict[int, Tuple[int, TimedBatch]] = {}
    by_family: Dict[int, List[Tuple[int, int, int, TimedBatch]]] = {}
    for machine, position, batch in sched.batches():
        by_family.setdefault(batch.family, []).append((batch.start, machine, position, batch))
    for family, timed in by_family.items():
        timed.sort(key=lambda entry: entry[:3])
        available = slots.get(family, [])
        if len(timed) > len(available):
            raise CapacityExceeded(
                f"family {family} uses {len(timed)} batches, the model has {len(available)}"
            )
        for index, (_, machine, _, batch) in zip(available, timed):
            placed[index] = (machine, batch)

    values: Assignment = {}
    completion = {}
    for job in inst.jobs:
        for index in slots.get(job.family, []):
            values[rp.x(job.id, index)] = 0
            values[rp.cjb(job.id, index)] = job.processing
    for batch in model_batches:
        values[rp.y(batch.index)] = 0
        values[rp.cb(batch.index)] = 0
        for m in range(1, inst.num_machines + 1):
            values[rp.y(batch.index, m)] = 0
        ids = sorted(inst.family_members[batch.family])
        for pos, i in enumerate(ids):
            for j in ids[pos + 1 :]:
                values[rp.z(batch.index, i, j)] = 0

    order: Dict[int, Tuple[int, int]] = {}
    for index, (machine, batch) in placed.items():
        values[rp.y(index)] = 1
        values[rp.y(index, machine + 1)] = 1
        values[rp.cb(index)] = batch.end
        order[index] = (machine, batch.start)
        rank = {}
        for position, scheduled in enumerate(batch.jobs):
            end = scheduled.start + inst.job(scheduled.id).processing
            values[rp.x(scheduled.id, index)] = 1
            values[rp.cjb(scheduled.id, index)] = end
            completion[scheduled.id] = end
            rank[scheduled.id] = position
        for i in rank:
            for j in rank:
                if i < j:
                    values[rp.z(index, i, j)] = int(rank[i] < rank[j])

    for a in model_batches:
        for b in model_batches[a.index :]:
            before = (
                a.index in order
                and b.index in order
                and order[a.index][0] == order[b.index][0]
                and order[a.index][1] < order[b.index][1]
            )
            values[rp.w(a.index, b.index)] = int(before)

    for job in inst.jobs:
        values[rp.c(job.id)] = completion.get(job.id, 0)
    return values


def schedule_to_pa_assignment(inst: Instance, sched: Schedule) -> Assignment:
    """Positional assignment values of a schedule timed with batch availability.

    The k-th batch of a machine fills slot k; trailing slots stay empty with
    zero start, work and completion.
    """
    count = pa.slot_count(inst)
    slots = range(1, count + 1)
    machines = range(1, inst.num_machines + 1)
    values: Assignment = {}
    for job in inst.jobs:
        for b in slots:
            for m in machines:
                values[pa.x(job.id, b, m)] = 0
    for f in range(inst.num_families):
        for b in slots:
            for m in machines:
                values[pa.y(f, b, m)] = 0
    for b in slots:
        for m in machines:
            values[pa.s(b, m)] = 0
            values[pa.p(b, m)] = 0
            values[pa.cb(b, m)] = 0

    completion = {}
    for machine, lane in enumerate(sched.machines):
        if len(lane) > count:
            raise CapacityExceeded(
                f"machine {machine} runs {len(lane)} batches, the model has {count} slots"
            )
        m = machine + 1
        for position, batch in enumerate(lane):
            b = position + 1
            values[pa.y(batch.family, b, m)] = 1
            values[pa.s(b, m)] = batch.start
            values[pa.p(b, m)] = sum(inst.job(job_id).processing for job_id in batch.job_ids)
            values[pa.cb(b, m)] = batch.end
            for job_id in batch.job_ids:
                values[pa.x(job_id, b, m)] = 1
                completion[job_id] = batch.end
    for job in inst.jobs:
        values[pa.c(job.id)] = completion.get(job.id, 0)
    return values
