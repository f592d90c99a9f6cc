from enum import Enum
from functools import cached_property
from typing import Any, Dict, Iterator, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Availability(str, Enum):
    """When a job counts as completed"""

    ITEM = "item"
    BATCH = "batch"


class Preemption(str, Enum):
    """Whether idle time may appear inside a batch"""

    ALLOWED = "allowed"
    FORBIDDEN = "forbidden"


class Initiation(str, Enum):
    """Whether a batch may start before all its jobs are released"""

    FLEXIBLE = "flexible"
    COMPLETE = "complete"


class ModelVariant(str, Enum):
    """Propagation style of the search"""

    IA = "ia"
    G = "g"
    H = "h"


class SolveStatus(str, Enum):
    """Outcome of a solver run"""

    OPTIMAL = "optimal"
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    UNKNOWN = "unknown"


class Job(BaseModel):
    """A job with weight, release time, processing time and family"""

    model_config = ConfigDict(frozen=True)

    id: int
    weight: int
    release: int
    processing: int
    family: int


class SetupMatrix(BaseModel):
    """Family setup times, between families and from the idle machine"""

    model_config = ConfigDict(frozen=True)

    inter: Tuple[Tuple[int, ...], ...]
    initial: Tuple[int, ...]

    def between(self, previous: Optional[int], family: int) -> int:
        """Setup before a batch of `family`; `previous` is None on an idle machine"""
        if previous is None:
            return self.initial[family]
        if previous == family:
            return 0
        return self.inter[previous][family]

    @property
    def max_inter(self) -> int:
        return max((max(row) for row in self.inter if row), default=0)

    @property
    def max_initial(self) -> int:
        return max(self.initial, default=0)


class BatchSizeBounds(BaseModel):
    """Minimum and maximum number of jobs per batch, per family"""

    model_config = ConfigDict(frozen=True)

    min_size: Tuple[int, ...]
    max_size: Tuple[int, ...]


class Instance(BaseModel):
    """Scheduling instance: jobs, identical machines, setups and size bounds"""

    model_config = ConfigDict(frozen=True)

    jobs: Tuple[Job, ...]
    num_machines: int
    num_families: int
    setups: SetupMatrix
    bounds: BatchSizeBounds

    @cached_property
    def job_index(self) -> Dict[int, Job]:
        return {job.id: job for job in self.jobs}

    def job(self, job_id: int) -> Job:
        return self.job_index[job_id]

    @cached_property
    def family_members(self) -> Tuple[Tuple[int, ...], ...]:
        """Job ids of every family, in instance order"""
        members: List[List[int]] = [[] for _ in range(self.num_families)]
        for job in self.jobs:
            if 0 <= job.family < self.num_families:
                members[job.family].append(job.id)
        return tuple(tuple(ids) for ids in members)

    def family_size(self, family: int) -> int:
        return len(self.family_members[family])

    # Rebuilt through the constructor: model_copy would carry stale cached lookups.
    def replace(self, **changes) -> "Instance":
        fields = {
            "jobs": self.jobs,
            "num_machines": self.num_machines,
            "num_families": self.num_families,
            "setups": self.setups,
            "bounds": self.bounds,
        }
        fields.update(changes)
        return Instance(**fields)

    def with_bounds(self, bounds: BatchSizeBounds) -> "Instance":
        return self.replace(bounds=bounds)

    def with_weights_scaled(self, factor: int) -> "Instance":
        jobs = tuple(
            job.model_copy(update={"weight": job.weight * factor}) for job in self.jobs
        )
        return self.replace(jobs=jobs)


class VariationConfig(BaseModel):
    """The three s-batch variation axes"""

    model_config = ConfigDict(frozen=True)

    availability: Availability = Availability.ITEM
    preemption: Preemption = Preemption.ALLOWED
    initiation: Initiation = Initiation.FLEXIBLE

    @classmethod
    def ipf(cls) -> "VariationConfig":
        return cls()

    @classmethod
    def bc(cls, preemption: Preemption = Preemption.ALLOWED) -> "VariationConfig":
        return cls(
            availability=Availability.BATCH,
            preemption=preemption,
            initiation=Initiation.COMPLETE,
        )

    @classmethod
    def parse(cls, name: str) -> "VariationConfig":
        """Build from a preset name (`ipf`, `bc`) or `availability/preemption/initiation`"""
        key = name.strip().lower().replace("·", "").replace(".", "")
        if key == "ipf":
            return cls.ipf()
        if key == "bc":
            return cls.bc()
        parts = key.split("/")
        if len(parts) != 3:
            raise ValueError(f"unknown variation {name!r}")
        return cls(
            availability=Availability(parts[0]),
            preemption=Preemption(parts[1]),
            initiation=Initiation(parts[2]),
        )

    @property
    def label(self) -> str:
        return f"{self.availability.value}/{self.preemption.value}/{self.initiation.value}"

    @property
    def item(self) -> bool:
        return self.availability is Availability.ITEM

    @property
    def contiguous(self) -> bool:
        """Batches run as one block once started"""
        return (
            self.preemption is Preemption.FORBIDDEN
            or self.initiation is Initiation.COMPLETE
        )


class ScheduledJob(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: int
    start: int


class TimedBatch(BaseModel):
    """A batch with its jobs in processing order and its span"""

    model_config = ConfigDict(frozen=True)

    family: int
    jobs: Tuple[ScheduledJob, ...]
    start: int
    end: int

    @property
    def job_ids(self) -> Tuple[int, ...]:
        return tuple(job.id for job in self.jobs)

    @property
    def size(self) -> int:
        return len(self.jobs)


class Schedule(BaseModel):
    """Per-machine ordered batches"""

    model_config = ConfigDict(frozen=True)

    machines: Tuple[Tuple[TimedBatch, ...], ...]

    def batches(self) -> Iterator[Tuple[int, int, TimedBatch]]:
        """Yield (machine, position, batch) in machine then position order"""
        for machine, lane in enumerate(self.machines):
            for position, batch in enumerate(lane):
                yield machine, position, batch

    def sequencing(self) -> List[List[List[int]]]:
        """Untimed structure: machines -> batches -> job ids"""
        return [[list(batch.job_ids) for batch in lane] for lane in self.machines]

    def to_document(self) -> List[List[Dict[str, Any]]]:
        return [
            [
                {
                    "family": batch.family,
                    "jobs": [{"id": job.id, "start": job.start} for job in batch.jobs],
                }
                for batch in lane
            ]
            for lane in self.machines
        ]


class Violation(BaseModel):
    model_config = ConfigDict(frozen=True)

    rule: str
    detail: str


class EvalReport(BaseModel):
    """Feasibility verdict with every violated rule and, if feasible, the TWCT"""

    model_config = ConfigDict(frozen=True)

    feasible: bool
    violations: Tuple[Violation, ...] = ()
    twct: Optional[int] = None
    job_completions: Dict[int, int] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_consistency(self):
        if self.feasible == bool(self.violations):
            raise ValueError("feasible must hold exactly when there are no violations")
        if self.feasible != (self.twct is not None):
            raise ValueError("twct is reported exactly for feasible schedules")
        return self

    def rules(self) -> List[str]:
        return [violation.rule for violation in self.violations]


class SolverConfig(BaseModel):
    """Search options"""

    model_config = ConfigDict(frozen=True)

    model_variant: ModelVariant = ModelVariant.IA
    variation: VariationConfig = Field(default_factory=VariationConfig)
    sizing_enabled: bool = True
    sb: bool = False
    sbt: bool = False
    dominance: bool = True
    time_limit: float = Field(default=60.0, gt=0)
    node_limit: Optional[int] = Field(default=None, ge=1)
    seed: int = 0
    workers: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def check_sbt(self):
        if self.sbt and (
            self.variation.availability is not Availability.BATCH
            or self.variation.initiation is not Initiation.COMPLETE
        ):
            raise ValueError(
                "sbt is only valid with batch availability and complete initiation"
            )
        return self


class TraceEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    elapsed: float
    objective: int


class SolveResult(BaseModel):
    """Outcome of a search run"""

    model_config = ConfigDict(frozen=True)

    status: SolveStatus
    schedule: Optional[Schedule] = None
    objective: Optional[int] = None
    lower_bound: int = 0
    nodes: int = 0
    elapsed: float = 0.0
    trace: Tuple[TraceEntry, ...] = ()

    @field_validator("trace")
    @classmethod
    def validate_trace(cls, v):
        for earlier, later in zip(v, v[1:]):
            if later.objective >= earlier.objective:
                raise ValueError("trace objectives must strictly decrease")
        return v

    @model_validator(mode="after")
    def check_status(self):
        if self.status is SolveStatus.OPTIMAL and self.objective != self.lower_bound:
            raise ValueError("an optimal result has objective equal to its bound")
        if self.objective is not None and self.lower_bound > self.objective:
            raise ValueError("lower bound above the incumbent")
        return self

    def to_document(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "objective": self.objective,
            "lower_bound": self.lower_bound,
            "nodes": self.nodes,
            "elapsed_ms": round(self.elapsed * 1000.0, 3),
            "trace": [
                {"ms": round(entry.elapsed * 1000.0, 3), "obj": entry.objective}
                for entry in self.trace
            ],
            "schedule": self.schedule.to_document() if self.schedule else None,
        }
