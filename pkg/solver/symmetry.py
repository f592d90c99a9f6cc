"""Symmetry breaking and dominance filters on candidate moves."""

from typing import List

from common.models import Initiation, Preemption, SolverConfig
from solver.state import APPEND, NEW, NEXT, Move, SearchState


def apply_symmetry_breaking(
    state: SearchState, cfg: SolverConfig, moves: List[Move]
) -> List[Move]:
    """Keep the moves that respect the enabled orderings.

    With `sb`, machines are interchangeable: the first job of every machine has
    a higher index than the first job of the machine before it. With `sbt`, the
    jobs of a batch are in (release, id) order, which changes nothing when a
    batch starts after all its releases and completes as a whole.
    """
    data = state.data
    kept = []
    for move in moves:
        if cfg.sb and move.kind == NEXT:
            first = state.first_job[state.machine]
            if first is not None and move.job < first:
                continue
        if cfg.sbt and move.kind == APPEND and state.open_jobs:
            last = state.open_jobs[-1]
            if (data.release[move.job], data.ids[move.job]) < (
                data.release[last],
                data.ids[last],
            ):
                continue
        kept.append(move)
    return kept


def dominance_applies(cfg: SolverConfig, state: SearchState) -> bool:
    """Whether splitting a run of one family into two batches is never better.

    Under item availability with preemption and flexible initiation the timing
    of a job does not depend on the batch it belongs to, only on its machine
    position; merging consecutive batches of one family keeps every start.
    """
    var = cfg.variation
    if not (
        cfg.dominance
        and var.item
        and var.preemption is Preemption.ALLOWED
        and var.initiation is Initiation.FLEXIBLE
    ):
        return False
    family = state.open_family
    if family is None:
        return False
    return not state.data.sizing or state.data.lower[family] == 1


def prune_dominated(state: SearchState, cfg: SolverConfig, moves: List[Move]) -> List[Move]:
    """Drop `new` moves that split a run of the open family below its maximum size"""
    if not dominance_applies(cfg, state):
        return moves
    family = state.open_family
    full = state.open_size >= state.data.upper[family]
    return [
        move
        for move in moves
        if not (move.kind == NEW and state.data.family[move.job] == family and not full)
    ]
