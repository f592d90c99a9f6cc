"""Search state of the branch and bound.

Jobs are appended to machine sequences; machines are filled in index order. Only
the last batch of the current machine is open: every other batch is closed and
exactly timed. The open batch is timed as if it closed now, which under every
variation is a lower bound on its final timing.
"""

from typing import Dict, List, NamedTuple, Optional, Tuple

from common.models import Instance, Preemption, VariationConfig, Initiation

APPEND = "append"
NEW = "new"
NEXT = "next"


class Move(NamedTuple):
    """Place `job` (internal index) in the open batch, a new batch, or a new machine"""

    kind: str
    job: int


class ProblemData:
    """Instance arrays indexed by internal job number"""

    def __init__(self, inst: Instance, var: VariationConfig, sizing_enabled: bool):
        self.inst = inst
        self.var = var
        self.sizing = sizing_enabled
        self.n = len(inst.jobs)
        self.ids = tuple(job.id for job in inst.jobs)
        self.weight = tuple(job.weight for job in inst.jobs)
        self.release = tuple(job.release for job in inst.jobs)
        self.processing = tuple(job.processing for job in inst.jobs)
        self.family = tuple(job.family for job in inst.jobs)
        self.num_machines = inst.num_machines
        self.num_families = inst.num_families
        self.inter = inst.setups.inter
        self.initial = inst.setups.initial

        unlimited = self.n + 1
        if sizing_enabled:
            self.lower = tuple(inst.bounds.min_size)
            self.upper = tuple(inst.bounds.max_size)
        else:
            self.lower = tuple(1 for _ in range(self.num_families))
            self.upper = tuple(unlimited for _ in range(self.num_families))

        self.item = var.item
        self.forbidden = var.preemption is Preemption.FORBIDDEN
        self.complete = var.initiation is Initiation.COMPLETE
        self.contiguous = self.forbidden or self.complete

        # branching order: (release, id)
        self.order = tuple(sorted(range(self.n), key=lambda j: (self.release[j], self.ids[j])))
        # weighted shortest processing time order for relaxations
        self.wspt = tuple(
            sorted(
                range(self.n),
                key=lambda j: (self.processing[j] / self.weight[j], self.ids[j]),
            )
        )
        self.members: Tuple[Tuple[int, ...], ...] = tuple(
            tuple(j for j in range(self.n) if self.family[j] == f)
            for f in range(self.num_families)
        )

    def setup(self, previous: Optional[int], family: int) -> int:
        if previous is None:
            return self.initial[family]
        if previous == family:
            return 0
        return self.inter[previous][family]


class SearchState:
    """Partial sequencing with incremental timing of the open batch"""

    def __init__(self, data: ProblemData):
        self.data = data
        self.machine = 0
        self.lanes: List[List[Tuple[int, ...]]] = [[] for _ in range(data.num_machines)]
        self.first_job: List[Optional[int]] = [None] * data.num_machines
        self.scheduled = [False] * data.n
        self.remaining_count = data.n
        self.family_remaining = [len(members) for members in data.members]
        self.committed = 0
        self.closed_end = 0
        self.closed_family: Optional[int] = None

        self.open_family: Optional[int] = None
        self.open_jobs: List[int] = []
        self._reset_open(0)

    # ---- open batch bookkeeping -------------------------------------------------

    def _reset_open(self, ready: int) -> None:
        self.open_ready = ready
        self.open_weight = 0
        self.open_work = 0
        self.open_shift = ready
        self.open_max_release = ready
        self.open_prefix = 0
        self.open_cursor = ready
        self.open_item = 0
        self.open_first_start = ready

    def _snapshot(self) -> tuple:
        return (
            self.machine,
            self.committed,
            self.closed_end,
            self.closed_family,
            self.open_family,
            tuple(self.open_jobs),
            self.open_ready,
            self.open_weight,
            self.open_work,
            self.open_shift,
            self.open_max_release,
            self.open_prefix,
            self.open_cursor,
            self.open_item,
            self.open_first_start,
        )

    def _restore(self, snap: tuple) -> None:
        (
            self.machine,
            self.committed,
            self.closed_end,
            self.closed_family,
            self.open_family,
            open_jobs,
            self.open_ready,
            self.open_weight,
            self.open_work,
            self.open_shift,
            self.open_max_release,
            self.open_prefix,
            self.open_cursor,
            self.open_item,
            self.open_first_start,
        ) = snap
        self.open_jobs = list(open_jobs)

    @property
    def open_size(self) -> int:
        return len(self.open_jobs)

    def open_start(self) -> int:
        if not self.data.contiguous:
            return self.open_first_start
        start = self.open_ready
        if self.data.forbidden:
            start = max(start, self.open_shift)
        if self.data.complete:
            start = max(start, self.open_max_release)
        return start

    def open_end(self) -> int:
        if self.open_family is None:
            return self.closed_end
        if self.data.contiguous:
            return self.open_start() + self.open_work
        return self.open_cursor

    def open_value(self) -> int:
        """Weighted completions of the open batch as currently timed"""
        if self.open_family is None:
            return 0
        if not self.data.item:
            return self.open_end() * self.open_weight
        if self.data.contiguous:
            return self.open_start() * self.open_weight + self.open_prefix
        return self.open_item

    def deficit(self) -> int:
        """Jobs the open batch still needs to reach its minimum size"""
        if self.open_family is None:
            return 0
        return max(0, self.data.lower[self.open_family] - self.open_size)

    def can_close(self) -> bool:
        return self.deficit() == 0

    # ---- moves ------------------------------------------------------------------

    def _close(self) -> None:
        self.committed += self.open_value()
        self.closed_end = self.open_end()
        self.closed_family = self.open_family
        self.lanes[self.machine].append(tuple(self.open_jobs))
        self.open_family = None
        self.open_jobs = []

    def _open(self, family: int) -> None:
        self.open_family = family
        self._reset_open(self.closed_end + self.data.setup(self.closed_family, family))

    def _push(self, job: int) -> None:
        data = self.data
        weight = data.weight[job]
        release = data.release[job]
        processing = data.processing[job]
        if not self.open_jobs:
            begin = max(release, self.open_ready)
            self.open_first_start = begin
        self.open_jobs.append(job)
        self.open_prefix += weight * (self.open_work + processing)
        self.open_shift = max(self.open_shift, release - self.open_work)
        self.open_work += processing
        self.open_weight += weight
        self.open_max_release = max(self.open_max_release, release)
        begin = max(release, self.open_cursor)
        self.open_cursor = begin + processing
        self.open_item += weight * self.open_cursor

    def apply(self, move: Move) -> tuple:
        """Perform a move and return the token that undoes it"""
        snap = self._snapshot()
        closed = False
        first_before = None
        job = move.job
        if move.kind != APPEND:
            if self.open_family is not None:
                self._close()
                closed = True
            if move.kind == NEXT:
                self.machine += 1
                self.closed_end = 0
                self.closed_family = None
            self._open(self.data.family[job])
        first_before = self.first_job[self.machine]
        if first_before is None:
            self.first_job[self.machine] = job
        self._push(job)
        self.scheduled[job] = True
        self.remaining_count -= 1
        self.family_remaining[self.data.family[job]] -= 1
        return snap, closed, first_before, job

    def undo(self, token: tuple) -> None:
        snap, closed, first_before, job = token
        self.first_job[self.machine] = first_before
        self.scheduled[job] = False
        self.remaining_count += 1
        self.family_remaining[self.data.family[job]] += 1
        self._restore(snap)
        if closed:
            self.lanes[self.machine].pop()

    # ---- results ----------------------------------------------------------------

    def final_value(self) -> int:
        return self.committed + self.open_value()

    def sequencing(self) -> List[List[List[int]]]:
        """Machines -> batches -> job ids, including the open batch"""
        ids = self.data.ids
        lanes = [[[ids[j] for j in batch] for batch in lane] for lane in self.lanes]
        if self.open_jobs:
            lanes[self.machine].append([ids[j] for j in self.open_jobs])
        return lanes

    def remaining(self) -> List[int]:
        return [j for j in self.data.order if not self.scheduled[j]]

    def remaining_by_family(self, family: int) -> List[int]:
        return [j for j in self.data.members[family] if not self.scheduled[j]]

    def batch_sizes(self) -> Dict[int, List[int]]:
        """Sizes of closed and open batches per family, for reporting"""
        sizes: Dict[int, List[int]] = {}
        for lane in self.lanes:
            for batch in lane:
                sizes.setdefault(self.data.family[batch[0]], []).append(len(batch))
        if self.open_jobs:
            sizes.setdefault(self.open_family, []).append(len(self.open_jobs))
        return sizes
