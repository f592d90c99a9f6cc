"""Constructive incumbent: balanced release-ordered batches, list scheduled."""

import logging
from typing import List, Optional

from common.models import Instance, VariationConfig
from core.timing import Sequencing, time_batch
from core.validation import infeasible_families

logger = logging.getLogger(__name__)


def family_batches(inst: Instance, sizing_enabled: bool) -> Optional[List[List[int]]]:
    """Split every family, in (release, id) order, into as many balanced batches as allowed"""
    batches = []
    for family, members in enumerate(inst.family_members):
        jobs = sorted(members, key=lambda job_id: (inst.job(job_id).release, job_id))
        if not jobs:
            continue
        lower = inst.bounds.min_size[family] if sizing_enabled else 1
        count = len(jobs) // lower
        if count == 0:
            return None
        base, extra = divmod(len(jobs), count)
        cursor = 0
        for index in range(count):
            size = base + (1 if index < extra else 0)
            batches.append(jobs[cursor : cursor + size])
            cursor += size
    return batches


def constructive_sequencing(
    inst: Instance, var: VariationConfig, sizing_enabled: bool
) -> Optional[Sequencing]:
    """Greedy list schedule; None if the size bounds cannot be met"""
    if sizing_enabled and infeasible_families(inst):
        return None
    pending = family_batches(inst, sizing_enabled)
    if pending is None:
        return None

    lanes: List[List[List[int]]] = [[] for _ in range(inst.num_machines)]
    ends = [0] * inst.num_machines
    last = [None] * inst.num_machines
    while pending:
        best = None
        for index, batch in enumerate(pending):
            jobs = [inst.job(job_id) for job_id in batch]
            family = jobs[0].family
            weight = sum(job.weight for job in jobs)
            for machine in range(inst.num_machines):
                ready = ends[machine] + inst.setups.between(last[machine], family)
                _, end = time_batch(
                    ready, [job.release for job in jobs], [job.processing for job in jobs], var
                )
                key = (end, -weight, batch[0], machine)
                if best is None or key < best[0]:
                    best = (key, index, machine, end, family)
        _, index, machine, end, family = best
        lanes[machine].append(pending.pop(index))
        ends[machine] = end
        last[machine] = family
    logger.debug(
        "Constructed initial sequencing",
        extra={"batches": sum(len(lane) for lane in lanes)},
    )
    return lanes
