"""Propagation styles of the search.

Each propagator can veto a move, declare a node dead and tighten its bound.
The model variant picks which ones run.
"""

import logging
from typing import List

from common.models import ModelVariant
from core.validation import can_partition
from solver.bounds import (
    deficit_bound,
    job_bound,
    lower_bound,
    remaining_bound,
    span_value,
)
from solver.state import APPEND, Move, SearchState

logger = logging.getLogger(__name__)


class Propagator:
    """No-op base"""

    name = "base"

    def allows(self, state: SearchState, move: Move) -> bool:
        return True

    def consistent(self, state: SearchState) -> bool:
        return True

    def bound(self, state: SearchState, base: int) -> int:
        return base


class SumOfPresences(Propagator):
    """Batch sizes as counts of present jobs, checked when a batch grows or closes"""

    name = "presences"

    def allows(self, state: SearchState, move: Move) -> bool:
        if state.open_family is None:
            return True
        if move.kind == APPEND:
            return state.open_size < state.data.upper[state.open_family]
        return state.can_close()


class SynchronizedSpan(Propagator):
    """The open batch stays open until it can be completed.

    Every family's remaining jobs must still split into batches within its size
    bounds, the open batch taking its share first. Under batch availability the
    open members complete no earlier than the shortest way of filling the batch.
    """

    name = "span"

    def consistent(self, state: SearchState) -> bool:
        data = state.data
        for family, remaining in enumerate(state.family_remaining):
            lower = data.lower[family]
            upper = data.upper[family]
            if family != state.open_family:
                if not can_partition(remaining, lower, upper):
                    return False
                continue
            size = state.open_size
            least = max(0, lower - size)
            most = min(upper - size, remaining)
            if not any(
                can_partition(remaining - taken, lower, upper)
                for taken in range(least, most + 1)
            ):
                return False
        return True

    def bound(self, state: SearchState, base: int) -> int:
        if state.deficit() == 0 or state.data.item:
            return base
        tightened = state.committed + span_value(state) + remaining_bound(state)
        return max(base, tightened)


class OccupancyProfile(Propagator):
    """Time-resolved occupancy of the open batch.

    Checks batch sizes like the presence counts and charges the jobs still
    needed to fill the open batch at their earliest completion after its end,
    in place of the independent per-job estimates of that family.
    """

    name = "profile"

    def __init__(self):
        self._counts = SumOfPresences()

    def allows(self, state: SearchState, move: Move) -> bool:
        return self._counts.allows(state, move)

    def bound(self, state: SearchState, base: int) -> int:
        if state.deficit() == 0:
            return base
        others = [
            job
            for job in state.remaining()
            if state.data.family[job] != state.open_family
        ]
        profiled = (
            state.committed
            + span_value(state)
            + deficit_bound(state)
            + job_bound(state, others)
        )
        return max(base, profiled)


def build_propagators(variant: ModelVariant) -> List[Propagator]:
    if variant is ModelVariant.IA:
        return [SumOfPresences()]
    if variant is ModelVariant.H:
        return [SumOfPresences(), SynchronizedSpan()]
    if variant is ModelVariant.G:
        return [OccupancyProfile(), SynchronizedSpan()]
    raise ValueError(f"unknown model variant {variant!r}")


def node_bound(state: SearchState, propagators: List[Propagator]) -> int:
    bound = lower_bound(state)
    for propagator in propagators:
        bound = propagator.bound(state, bound)
    return bound
