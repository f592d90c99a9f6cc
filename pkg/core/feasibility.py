"""Feasibility checking and TWCT evaluation of timed schedules."""

from typing import Dict, List

from common.errors import InvalidSchedule
from common.models import (
    EvalReport,
    Initiation,
    Instance,
    Preemption,
    Schedule,
    VariationConfig,
    Violation,
)


def _completions(inst: Instance, sched: Schedule, var: VariationConfig) -> Dict[int, int]:
    completions = {}
    for _, _, batch in sched.batches():
        for job in batch.jobs:
            if var.item:
                completions[job.id] = job.start + inst.job(job.id).processing
            else:
                completions[job.id] = batch.end
    return completions


def check_feasibility(
    inst: Instance, sched: Schedule, var: VariationConfig, sizing_enabled: bool
) -> EvalReport:
    """Check a timed schedule against every rule and report all violations.

    Rules are checked in order: partition, release times, batch structure
    (family purity, disjoint ordered jobs, span), setups, batch sizes,
    non-preemption and complete initiation.
    """
    violations: List[Violation] = []
    known = inst.job_index

    if len(sched.machines) > inst.num_machines:
        violations.append(
            Violation(
                rule="machine-count",
                detail=f"{len(sched.machines)} machines used, {inst.num_machines} available",
            )
        )

    # partition
    seen: Dict[int, int] = {}
    for machine, position, batch in sched.batches():
        for job in batch.jobs:
            if job.id not in known:
                violations.append(
                    Violation(
                        rule="unknown-job",
                        detail=f"job {job.id} on machine {machine} is not in the instance",
                    )
                )
                continue
            seen[job.id] = seen.get(job.id, 0) + 1
    for job_id, count in seen.items():
        if count > 1:
            violations.append(
                Violation(rule="partition", detail=f"job {job_id} is scheduled {count} times")
            )
    for job in inst.jobs:
        if job.id not in seen:
            violations.append(
                Violation(rule="partition", detail=f"job {job.id} is not scheduled")
            )

    # release times
    for _, _, batch in sched.batches():
        for job in batch.jobs:
            if job.id in known and job.start < known[job.id].release:
                violations.append(
                    Violation(
                        rule="release",
                        detail=(
                            f"job {job.id} starts at {job.start} "
                            f"before its release {known[job.id].release}"
                        ),
                    )
                )

    # batch structure
    for machine, position, batch in sched.batches():
        where = f"machine {machine} batch {position}"
        if not batch.jobs:
            violations.append(Violation(rule="empty-batch", detail=f"{where} has no jobs"))
            continue
        if not 0 <= batch.family < inst.num_families:
            violations.append(
                Violation(rule="family", detail=f"{where} has unknown family {batch.family}")
            )
        for job in batch.jobs:
            if job.id in known and known[job.id].family != batch.family:
                violations.append(
                    Violation(
                        rule="family",
                        detail=(
                            f"job {job.id} of family {known[job.id].family} "
                            f"in {where} of family {batch.family}"
                        ),
                    )
                )
        jobs = [job for job in batch.jobs if job.id in known]
        for earlier, later in zip(jobs, jobs[1:]):
            earlier_end = earlier.start + known[earlier.id].processing
            if later.start < earlier_end:
                violations.append(
                    Violation(
                        rule="overlap",
                        detail=(
                            f"job {later.id} starts at {later.start} "
                            f"before job {earlier.id} ends at {earlier_end} in {where}"
                        ),
                    )
                )
        if jobs:
            last_end = jobs[-1].start + known[jobs[-1].id].processing
            if batch.start != jobs[0].start or batch.end != last_end:
                violations.append(
                    Violation(
                        rule="batch-span",
                        detail=(
                            f"{where} spans [{batch.start}, {batch.end}) "
                            f"but its jobs span [{jobs[0].start}, {last_end})"
                        ),
                    )
                )

    # setups
    for machine, lane in enumerate(sched.machines):
        previous = None
        for position, batch in enumerate(lane):
            if not batch.jobs or not 0 <= batch.family < inst.num_families:
                continue
            if previous is None:
                setup = inst.setups.initial[batch.family]
                if batch.start < setup:
                    violations.append(
                        Violation(
                            rule="initial-setup",
                            detail=(
                                f"machine {machine} batch {position} starts at {batch.start} "
                                f"before the initial setup {setup} ends"
                            ),
                        )
                    )
            else:
                setup = inst.setups.between(previous.family, batch.family)
                if batch.start < previous.end + setup:
                    violations.append(
                        Violation(
                            rule="setup",
                            detail=(
                                f"machine {machine} batch {position} starts at {batch.start}, "
                                f"previous batch ends at {previous.end} and needs setup {setup}"
                            ),
                        )
                    )
            previous = batch

    # batch sizes
    if sizing_enabled:
        for machine, position, batch in sched.batches():
            if not 0 <= batch.family < inst.num_families:
                continue
            lower = inst.bounds.min_size[batch.family]
            upper = inst.bounds.max_size[batch.family]
            if batch.size < lower:
                violations.append(
                    Violation(
                        rule="min-size",
                        detail=(
                            f"machine {machine} batch {position} of family {batch.family} "
                            f"has {batch.size} jobs, minimum {lower}"
                        ),
                    )
                )
            if batch.size > upper:
                violations.append(
                    Violation(
                        rule="max-size",
                        detail=(
                            f"machine {machine} batch {position} of family {batch.family} "
                            f"has {batch.size} jobs, maximum {upper}"
                        ),
                    )
                )

    if var.preemption is Preemption.FORBIDDEN:
        for machine, position, batch in sched.batches():
            work = sum(known[job.id].processing for job in batch.jobs if job.id in known)
            if batch.jobs and batch.end - batch.start != work:
                violations.append(
                    Violation(
                        rule="non-preemption",
                        detail=(
                            f"machine {machine} batch {position} lasts {batch.end - batch.start} "
                            f"for {work} units of work"
                        ),
                    )
                )

    if var.initiation is Initiation.COMPLETE:
        for machine, position, batch in sched.batches():
            releases = [known[job.id].release for job in batch.jobs if job.id in known]
            if releases and batch.start < max(releases):
                violations.append(
                    Violation(
                        rule="complete-initiation",
                        detail=(
                            f"machine {machine} batch {position} starts at {batch.start} "
                            f"before its last release {max(releases)}"
                        ),
                    )
                )

    if violations:
        return EvalReport(feasible=False, violations=tuple(violations))

    completions = _completions(inst, sched, var)
    twct = sum(inst.job(job_id).weight * completion for job_id, completion in completions.items())
    return EvalReport(feasible=True, twct=twct, job_completions=completions)


def evaluate_twct(inst: Instance, sched: Schedule, var: VariationConfig) -> int:
    """Total weighted completion time of a feasible schedule.

    Batch sizes are not part of the guard: sizing-free schedules evaluate too.
    """
    report = check_feasibility(inst, sched, var, sizing_enabled=False)
    if not report.feasible:
        raise InvalidSchedule(report.violations)
    return report.twct
