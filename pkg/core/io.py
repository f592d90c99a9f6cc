"""JSON file formats for instances and schedules."""

import json
from pathlib import Path
from typing import Any, Dict, List, Union

from pydantic import BaseModel

from common.models import (
    BatchSizeBounds,
    Instance,
    Job,
    Schedule,
    ScheduledJob,
    SetupMatrix,
    TimedBatch,
)


class InstanceDocument(BaseModel):
    """Canonical on-disk instance layout"""

    num_machines: int
    num_families: int
    jobs: List[Job]
    setup_inter: List[List[int]]
    setup_initial: List[int]
    min_batch: List[int]
    max_batch: List[int]

    @classmethod
    def from_instance(cls, inst: Instance) -> "InstanceDocument":
        return cls(
            num_machines=inst.num_machines,
            num_families=inst.num_families,
            jobs=list(inst.jobs),
            setup_inter=[list(row) for row in inst.setups.inter],
            setup_initial=list(inst.setups.initial),
            min_batch=list(inst.bounds.min_size),
            max_batch=list(inst.bounds.max_size),
        )

    def to_instance(self) -> Instance:
        return Instance(
            jobs=tuple(self.jobs),
            num_machines=self.num_machines,
            num_families=self.num_families,
            setups=SetupMatrix(
                inter=tuple(tuple(row) for row in self.setup_inter),
                initial=tuple(self.setup_initial),
            ),
            bounds=BatchSizeBounds(
                min_size=tuple(self.min_batch), max_size=tuple(self.max_batch)
            ),
        )


class ScheduledJobDocument(BaseModel):
    id: int
    start: int


class BatchDocument(BaseModel):
    family: int
    jobs: List[ScheduledJobDocument]


def instance_to_json(inst: Instance) -> str:
    return InstanceDocument.from_instance(inst).model_dump_json(indent=2) + "\n"


def instance_from_json(text: Union[str, bytes]) -> Instance:
    return InstanceDocument.model_validate_json(text).to_instance()


def load_instance(path: Union[str, Path]) -> Instance:
    return instance_from_json(Path(path).read_text())


def save_instance(inst: Instance, path: Union[str, Path]) -> None:
    Path(path).write_text(instance_to_json(inst))


def schedule_from_document(data: List[List[Dict[str, Any]]], inst: Instance) -> Schedule:
    """Build a Schedule; batch spans follow from job starts and processing times.

    Jobs unknown to the instance get a zero-length span so the feasibility check
    can report them instead of failing here.
    """
    lanes = []
    for lane in data:
        batches = []
        for raw in lane:
            batch = BatchDocument.model_validate(raw)
            jobs = tuple(ScheduledJob(id=job.id, start=job.start) for job in batch.jobs)
            if jobs:
                last = jobs[-1]
                processing = (
                    inst.job(last.id).processing if last.id in inst.job_index else 0
                )
                start, end = jobs[0].start, last.start + processing
            else:
                start = end = 0
            batches.append(TimedBatch(family=batch.family, jobs=jobs, start=start, end=end))
        lanes.append(tuple(batches))
    return Schedule(machines=tuple(lanes))


def load_schedule(path: Union[str, Path], inst: Instance) -> Schedule:
    data = json.loads(Path(path).read_text())
    if isinstance(data, dict) and "schedule" in data:
        data = data["schedule"]
    return schedule_from_document(data, inst)


def schedule_to_json(sched: Schedule) -> str:
    return json.dumps(sched.to_document(), indent=2) + "\n"
