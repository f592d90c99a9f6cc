"""Admissible lower bounds on the objective of every completion of a node."""

from typing import List, Optional

from common.models import Instance, VariationConfig
from solver.state import SearchState


def earliest_starts(state: SearchState, jobs: List[int]) -> List[int]:
    """Earliest start of each unscheduled job on the current or a fresh machine"""
    data = state.data
    fresh = state.machine + 1 < data.num_machines or state.open_family is None
    available = state.open_end()
    starts = []
    for job in jobs:
        family = data.family[job]
        release = data.release[job]
        best = None
        if state.open_family is not None:
            best = max(release, available + data.setup(state.open_family, family))
        if fresh:
            candidate = max(release, data.initial[family])
            best = candidate if best is None else min(best, candidate)
        starts.append(best)
    return starts


def job_bound(state: SearchState, jobs: List[int]) -> int:
    """Sum of weighted earliest completions, each job on its own"""
    data = state.data
    return sum(
        data.weight[job] * (start + data.processing[job])
        for job, start in zip(jobs, earliest_starts(state, jobs))
    )


def pool_bound(state: SearchState) -> int:
    """Parallel-machine relaxation of the unscheduled jobs.

    Drops setups, families and batching: the remaining jobs go to the machines
    not yet closed, all available from a common time. The weighted completion
    sum on m machines is at least the single-machine WSPT value divided by m
    plus (m - 1) / (2m) of the weighted processing.
    """
    data = state.data
    remaining = [j for j in data.wspt if not state.scheduled[j]]
    if not remaining:
        return 0
    machines = data.num_machines - state.machine
    available = [state.open_end()] if state.open_family is not None else []
    if state.open_family is None or machines > 1:
        available.append(min(data.initial[data.family[j]] for j in remaining))
    common = max(min(available), min(data.release[j] for j in remaining))

    total_weight = 0
    weighted_work = 0
    single = 0
    clock = 0
    for job in remaining:
        clock += data.processing[job]
        single += data.weight[job] * clock
        total_weight += data.weight[job]
        weighted_work += data.weight[job] * data.processing[job]
    numerator = 2 * single + (machines - 1) * weighted_work
    spread = -(-numerator // (2 * machines))
    return common * total_weight + spread


def remaining_bound(state: SearchState) -> int:
    jobs = state.remaining()
    if not jobs:
        return 0
    return max(job_bound(state, jobs), pool_bound(state))


def lower_bound(
    state: SearchState,
    inst: Optional[Instance] = None,
    var: Optional[VariationConfig] = None,
) -> int:
    """Closed batches exactly, the open batch as timed now, the rest relaxed.

    The instance and variation are read from `state.data`, built once per
    solve. `inst` and `var` are optional and must match it when given.
    """
    if inst is not None and inst != state.data.inst:
        raise ValueError("state was built for a different instance")
    if var is not None and var != state.data.var:
        raise ValueError("state was built for a different variation")
    return state.committed + state.open_value() + remaining_bound(state)


def span_value(state: SearchState) -> int:
    """Open batch value once it holds its minimum number of jobs.

    Only tighter than the current value under batch availability, where every
    member completes with the batch.
    """
    data = state.data
    deficit = state.deficit()
    if deficit == 0 or data.item:
        return state.open_value()
    pending = sorted(data.processing[j] for j in state.remaining_by_family(state.open_family))
    return state.open_weight * (state.open_end() + sum(pending[:deficit]))


def deficit_bound(state: SearchState) -> int:
    """Weighted completion of the jobs the open batch still has to take in.

    The d cheapest weights pay for the d shortest prefix completions after the
    current end, heaviest first.
    """
    data = state.data
    deficit = state.deficit()
    if deficit == 0:
        return 0
    family = state.open_family
    pending = state.remaining_by_family(family)
    lengths = sorted(data.processing[j] for j in pending)[:deficit]
    weights = sorted((data.weight[j] for j in pending))[:deficit]
    weights.reverse()
    end = state.open_end()
    if data.item:
        completions = []
        clock = end
        for length in lengths:
            clock += length
            completions.append(clock)
    else:
        completions = [end + sum(lengths)] * deficit
    return sum(weight * completion for weight, completion in zip(weights, completions))
