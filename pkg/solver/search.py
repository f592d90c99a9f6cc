"""Depth-first branch and bound over machine sequences."""

import threading
import time
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple
from uuid import uuid4

from common.config import settings
from common.errors import InfeasibleInstance, InvalidInstance, InvalidSchedule
from common.logging_config import RunLogger, setup_logging
from common.metrics import (
    solver_incumbents_total,
    solver_nodes_total,
    solver_run_duration,
    solver_runs_total,
)
from common.models import (
    Instance,
    SolverConfig,
    SolveResult,
    SolveStatus,
    TraceEntry,
)
from core.feasibility import check_feasibility
from core.timing import Sequencing, left_shift_timing, sequencing_twct
from core.validation import infeasible_families, structural_violations
from solver.heuristic import constructive_sequencing
from solver.propagators import Propagator, build_propagators, node_bound
from solver.state import APPEND, NEW, NEXT, Move, ProblemData, SearchState
from solver.symmetry import apply_symmetry_breaking, prune_dominated

logger = setup_logging("solver", settings.log_level)


class Incumbent:
    """Best known sequencing, shared between search threads"""

    def __init__(self, started: float):
        self._lock = threading.Lock()
        self._started = started
        self.value: Optional[int] = None
        self.sequencing: Optional[Sequencing] = None
        self.trace: List[TraceEntry] = []

    def offer(self, value: int, sequencing: Sequencing) -> bool:
        with self._lock:
            if self.value is not None and value >= self.value:
                return False
            self.value = value
            self.sequencing = sequencing
            self.trace.append(
                TraceEntry(elapsed=time.perf_counter() - self._started, objective=value)
            )
            return True

    def cutoff(self) -> float:
        value = self.value
        return float("inf") if value is None else value


class BranchAndBound:
    """Search one instance under one solver configuration"""

    def __init__(self, inst: Instance, cfg: SolverConfig, log: Optional[RunLogger] = None):
        self.inst = inst
        self.cfg = cfg
        self.data = ProblemData(inst, cfg.variation, cfg.sizing_enabled)
        self.propagators: List[Propagator] = build_propagators(cfg.model_variant)
        self.model = cfg.model_variant.value
        self.logger = log or RunLogger(logger, str(uuid4()))

        self._lock = threading.Lock()
        self._started = 0.0
        self._deadline = 0.0
        self._stopped = threading.Event()
        self.nodes = 0
        self.open_bounds: List[int] = []
        self.incumbent: Optional[Incumbent] = None

    # ---- limits -------------------------------------------------------------------

    def _count_node(self) -> bool:
        """Count a node; False once a limit is hit"""
        with self._lock:
            if self._stopped.is_set():
                return False
            if time.perf_counter() >= self._deadline or (
                self.cfg.node_limit is not None and self.nodes >= self.cfg.node_limit
            ):
                self._stopped.set()
                return False
            self.nodes += 1
            return True

    def _leave_open(self, bound: int) -> None:
        with self._lock:
            self.open_bounds.append(bound)

    # ---- branching ----------------------------------------------------------------

    def candidate_moves(self, state: SearchState) -> List[Move]:
        data = self.data
        moves = []
        for job in state.remaining():
            family = data.family[job]
            if state.open_family is None:
                moves.append(Move(NEW, job))
                continue
            if family == state.open_family:
                moves.append(Move(APPEND, job))
            moves.append(Move(NEW, job))
            if state.machine + 1 < data.num_machines:
                moves.append(Move(NEXT, job))
        moves = [
            move
            for move in moves
            if all(propagator.allows(state, move) for propagator in self.propagators)
        ]
        moves = apply_symmetry_breaking(state, self.cfg, moves)
        return prune_dominated(state, self.cfg, moves)

    def children(self, state: SearchState, parent_bound: int) -> List[Tuple[int, Move]]:
        """Feasible children with their bounds, best bound first"""
        scored = []
        for rank, move in enumerate(self.candidate_moves(state)):
            token = state.apply(move)
            if all(propagator.consistent(state) for propagator in self.propagators):
                bound = max(parent_bound, node_bound(state, self.propagators))
                scored.append((bound, rank, move))
            state.undo(token)
        scored.sort()
        return [(bound, move) for bound, _, move in scored]

    def _dfs(self, state: SearchState, bound: int) -> None:
        if not self._count_node():
            self._leave_open(bound)
            return
        if state.remaining_count == 0:
            if state.can_close() and self.incumbent.offer(
                state.final_value(), state.sequencing()
            ):
                solver_incumbents_total.labels(model=self.model).inc()
                self.logger.info(
                    "New incumbent",
                    extra={"objective": self.incumbent.value, "nodes": self.nodes},
                )
            return
        children = self.children(state, bound)
        for child_bound, move in children:
            if child_bound >= self.incumbent.cutoff():
                break
            if self._stopped.is_set():
                self._leave_open(child_bound)
                break
            token = state.apply(move)
            self._dfs(state, child_bound)
            state.undo(token)

    def _run_subtrees(self, moves: List[Tuple[int, Move]]) -> None:
        for child_bound, move in moves:
            if child_bound >= self.incumbent.cutoff():
                continue
            if self._stopped.is_set():
                self._leave_open(child_bound)
                continue
            state = SearchState(self.data)
            state.apply(move)
            self._dfs(state, child_bound)

    # ---- driver -------------------------------------------------------------------

    def seed_incumbent(self) -> None:
        sequencing = constructive_sequencing(
            self.inst, self.cfg.variation, self.cfg.sizing_enabled
        )
        if sequencing is None:
            return
        value = sequencing_twct(self.inst, sequencing, self.cfg.variation)
        self.incumbent.offer(value, sequencing)
        self.logger.info("Initial incumbent", extra={"objective": value})

    def run(self) -> SolveResult:
        self._started = time.perf_counter()
        self._deadline = self._started + self.cfg.time_limit
        self.incumbent = Incumbent(self._started)
        self.seed_incumbent()

        root = SearchState(self.data)
        root_bound = node_bound(root, self.propagators)
        if self.cfg.workers == 1:
            self._dfs(root, root_bound)
        else:
            self._count_node()
            children = self.children(root, root_bound)
            shares = [children[w :: self.cfg.workers] for w in range(self.cfg.workers)]
            with ThreadPoolExecutor(max_workers=self.cfg.workers) as pool:
                for future in [pool.submit(self._run_subtrees, share) for share in shares]:
                    future.result()

        return self._result(root_bound)

    def _result(self, root_bound: int) -> SolveResult:
        elapsed = time.perf_counter() - self._started
        incumbent = self.incumbent
        complete = not self.open_bounds
        if incumbent.value is None:
            status = SolveStatus.INFEASIBLE if complete else SolveStatus.UNKNOWN
            lower = min(self.open_bounds, default=root_bound) if not complete else 0
            return SolveResult(
                status=status, lower_bound=max(lower, 0), nodes=self.nodes, elapsed=elapsed
            )

        schedule = left_shift_timing(self.inst, incumbent.sequencing, self.cfg.variation)
        report = check_feasibility(
            self.inst, schedule, self.cfg.variation, self.cfg.sizing_enabled
        )
        if not report.feasible:
            raise InvalidSchedule(report.violations)
        lower = min([incumbent.value] + self.open_bounds)
        status = SolveStatus.OPTIMAL if lower == incumbent.value else SolveStatus.FEASIBLE
        return SolveResult(
            status=status,
            schedule=schedule,
            objective=incumbent.value,
            lower_bound=lower,
            nodes=self.nodes,
            elapsed=elapsed,
            trace=tuple(incumbent.trace),
        )


def solve(inst: Instance, cfg: SolverConfig, run_id: Optional[str] = None) -> SolveResult:
    """Minimize total weighted completion time.

    Raises InvalidInstance on structural errors and InfeasibleInstance when the
    batch size bounds cannot be met. Runs are deterministic for one worker; the
    seed is recorded with the run. Records of the run carry `run_id`, a
    fresh id unless the caller passes one.
    """
    violations = structural_violations(inst)
    if violations:
        raise InvalidInstance(violations)
    if cfg.sizing_enabled:
        families = infeasible_families(inst)
        if families:
            raise InfeasibleInstance(families)

    run_log = RunLogger(logger, run_id or str(uuid4()))
    run_log.info(
        "Starting search",
        extra={
            "jobs": len(inst.jobs),
            "machines": inst.num_machines,
            "model": cfg.model_variant.value,
            "variation": cfg.variation.label,
            "sizing": cfg.sizing_enabled,
            "seed": cfg.seed,
            "workers": cfg.workers,
        },
    )
    search = BranchAndBound(inst, cfg, log=run_log)
    with solver_run_duration.labels(model=search.model).time():
        result = search.run()
    solver_nodes_total.labels(model=search.model).inc(result.nodes)
    solver_runs_total.labels(model=search.model, status=result.status.value).inc()
    run_log.info(
        "Search finished",
        extra={
            "status": result.status.value,
            "objective": result.objective,
            "lower_bound": result.lower_bound,
            "nodes": result.nodes,
            "elapsed": result.elapsed,
        },
    )
    return result
