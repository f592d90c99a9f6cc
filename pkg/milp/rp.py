"""Relative positioning formulation, item availability with preemption and flexible initiation.

Batches of family f are the slots B_f = 1..N_f, numbered globally. Binary
variables place jobs in batches, batches on machines, batches before batches
and jobs before jobs inside a batch; completion variables follow through
conditional rows switched off by a big horizon K.
"""

from typing import Dict, List, NamedTuple, Optional

from common.models import Instance
from core.validation import max_batch_counts
from milp.horizon import default_big_k
from milp.model import MilpModel, Sense


class RpBatch(NamedTuple):
    index: int  # global, 1-based
    family: int
    slot: int  # 1-based within the family


def rp_batches(inst: Instance) -> List[RpBatch]:
    counts = max_batch_counts(inst, sizing_enabled=True).per_family
    batches = []
    for family, count in enumerate(counts):
        for slot in range(1, count + 1):
            batches.append(RpBatch(len(batches) + 1, family, slot))
    return batches


def x(job: int, batch: int) -> str:
    return f"x[{job},{batch}]"


def y(batch: int, machine: Optional[int] = None) -> str:
    return f"y[{batch}]" if machine is None else f"y[{batch},{machine}]"


def z(batch: int, first: int, second: int) -> str:
    return f"z[{batch},{first},{second}]"


def w(first: int, second: int) -> str:
    return f"w[{first},{second}]"


def c(job: int) -> str:
    return f"C[{job}]"


def cb(batch: int) -> str:
    return f"Cb[{batch}]"


def cjb(job: int, batch: int) -> str:
    return f"Cjb[{job},{batch}]"


def encode_rp(inst: Instance, K: Optional[int] = None) -> MilpModel:
    """Build the relative positioning model; machines are numbered from 1"""
    K = default_big_k(inst) if K is None else K
    model = MilpModel("relative_positioning")
    batches = rp_batches(inst)
    by_family: Dict[int, List[RpBatch]] = {}
    for batch in batches:
        by_family.setdefault(batch.family, []).append(batch)
    machines = range(1, inst.num_machines + 1)
    members = {f: sorted(ids) for f, ids in enumerate(inst.family_members)}
    inter = inst.setups.inter

    for job in inst.jobs:
        for batch in by_family.get(job.family, []):
            model.binary(x(job.id, batch.index))
    for batch in batches:
        model.binary(y(batch.index))
    for batch in batches:
        for m in machines:
            model.binary(y(batch.index, m))
    for batch in batches:
        ids = members[batch.family]
        for pos, i in enumerate(ids):
            for j in ids[pos + 1 :]:
                model.binary(z(batch.index, i, j))
    for a in batches:
        for b in batches[a.index :]:
            model.binary(w(a.index, b.index))
    for job in inst.jobs:
        model.continuous(c(job.id))
    for batch in batches:
        model.continuous(cb(batch.index))
    for job in inst.jobs:
        for batch in by_family.get(job.family, []):
            model.continuous(cjb(job.id, batch.index))

    model.set_objective((job.weight, c(job.id)) for job in inst.jobs)

    for job in inst.jobs:
        model.add_constraint(
            f"assign_job[{job.id}]",
            ((1, x(job.id, b.index)) for b in by_family.get(job.family, [])),
            Sense.EQ,
            1,
        )
    for batch in batches:
        model.add_constraint(
            f"batch_machine[{batch.index}]",
            [(1, y(batch.index, m)) for m in machines] + [(-1, y(batch.index))],
            Sense.EQ,
            0,
        )
    for job in inst.jobs:
        for batch in by_family.get(job.family, []):
            model.add_constraint(
                f"use_batch[{job.id},{batch.index}]",
                [(1, x(job.id, batch.index)), (-1, y(batch.index))],
                Sense.LE,
                0,
            )
    for batch in batches:
        assigned = [(1, x(j, batch.index)) for j in members[batch.family]]
        model.add_constraint(
            f"min_size[{batch.index}]",
            assigned + [(-inst.bounds.min_size[batch.family], y(batch.index))],
            Sense.GE,
            0,
        )
        model.add_constraint(
            f"max_size[{batch.index}]",
            assigned + [(-inst.bounds.max_size[batch.family], y(batch.index))],
            Sense.LE,
            0,
        )

    for a in batches:
        for b in batches[a.index :]:
            for m in machines:
                # jobs of the later-indexed batch b when a runs first
                for j in members[b.family]:
                    p = inst.job(j).processing
                    model.add_constraint(
                        f"batch_after[{a.index},{b.index},{j},{m}]",
                        [
                            (1, cjb(j, b.index)),
                            (-1, cb(a.index)),
                            (-K, w(a.index, b.index)),
                            (-K, x(j, b.index)),
                            (-K, y(a.index, m)),
                            (-K, y(b.index, m)),
                        ],
                        Sense.GE,
                        inter[a.family][b.family] + p - 4 * K,
                    )
                # jobs of a when b runs first
                for j in members[a.family]:
                    p = inst.job(j).processing
                    model.add_constraint(
                        f"batch_before[{a.index},{b.index},{j},{m}]",
                        [
                            (1, cjb(j, a.index)),
                            (-1, cb(b.index)),
                            (K, w(a.index, b.index)),
                            (-K, x(j, a.index)),
                            (-K, y(a.index, m)),
                            (-K, y(b.index, m)),
                        ],
                        Sense.GE,
                        inter[b.family][a.family] + p - 3 * K,
                    )

    for job in inst.jobs:
        for batch in by_family.get(job.family, []):
            model.add_constraint(
                f"release[{job.id},{batch.index}]",
                [
                    (1, cjb(job.id, batch.index)),
                    (-(job.release + job.processing), y(batch.index)),
                    (-K, x(job.id, batch.index)),
                ],
                Sense.GE,
                -K,
            )
    for job in inst.jobs:
        for batch in by_family.get(job.family, []):
            model.add_constraint(
                f"initial_setup[{job.id},{batch.index}]",
                [
                    (1, cjb(job.id, batch.index)),
                    (-(inst.setups.initial[job.family] + job.processing), y(batch.index)),
                    (-K, x(job.id, batch.index)),
                ],
                Sense.GE,
                -K,
            )

    for batch in batches:
        ids = members[batch.family]
        for pos, i in enumerate(ids):
            for j in ids[pos + 1 :]:
                pi = inst.job(i).processing
                pj = inst.job(j).processing
                model.add_constraint(
                    f"job_after[{batch.index},{i},{j}]",
                    [
                        (1, cjb(j, batch.index)),
                        (-1, cjb(i, batch.index)),
                        (-pj, y(batch.index)),
                        (-K, z(batch.index, i, j)),
                        (-K, x(i, batch.index)),
                        (-K, x(j, batch.index)),
                    ],
                    Sense.GE,
                    -3 * K,
                )
                model.add_constraint(
                    f"job_before[{batch.index},{i},{j}]",
                    [
                        (1, cjb(i, batch.index)),
                        (-1, cjb(j, batch.index)),
                        (-pi, y(batch.index)),
                        (K, z(batch.index, i, j)),
                        (-K, x(i, batch.index)),
                        (-K, x(j, batch.index)),
                    ],
                    Sense.GE,
                    -2 * K,
                )

    for batch in batches:
        for j in members[batch.family]:
            model.add_constraint(
                f"batch_completion[{batch.index},{j}]",
                [(1, cb(batch.index)), (-1, cjb(j, batch.index)), (-K, x(j, batch.index))],
                Sense.GE,
                -K,
            )
    for job in inst.jobs:
        for batch in by_family.get(job.family, []):
            model.add_constraint(
                f"item_completion[{job.id},{batch.index}]",
                [(1, c(job.id)), (-1, cjb(job.id, batch.index)), (-K, x(job.id, batch.index))],
                Sense.GE,
                -K,
            )
    return model
