"""Positional assignment formulation, batch availability with complete initiation.

Every machine has N positional slots; used slots come first. Jobs are assigned
to a slot of a machine and the slot takes the family of its jobs. The order of
jobs inside a slot is not modelled.
"""

from typing import Optional

from common.models import Instance
from core.validation import max_batch_counts
from milp.horizon import default_big_k
from milp.model import MilpModel, Sense


def slot_count(inst: Instance) -> int:
    return max_batch_counts(inst, sizing_enabled=True).total


def x(job: int, slot: int, machine: int) -> str:
    return f"x[{job},{slot},{machine}]"


def y(family: int, slot: int, machine: int) -> str:
    return f"y[{family},{slot},{machine}]"


def s(slot: int, machine: int) -> str:
    return f"S[{slot},{machine}]"


def p(slot: int, machine: int) -> str:
    return f"P[{slot},{machine}]"


def cb(slot: int, machine: int) -> str:
    return f"Cb[{slot},{machine}]"


def c(job: int) -> str:
    return f"C[{job}]"


def encode_pa(inst: Instance, K: Optional[int] = None) -> MilpModel:
    """Build the positional assignment model; slots and machines are numbered from 1"""
    K = default_big_k(inst) if K is None else K
    model = MilpModel("positional_assignment")
    slots = range(1, slot_count(inst) + 1)
    machines = range(1, inst.num_machines + 1)
    families = range(inst.num_families)

    for job in inst.jobs:
        for b in slots:
            for m in machines:
                model.binary(x(job.id, b, m))
    for f in families:
        for b in slots:
            for m in machines:
                model.binary(y(f, b, m))
    for b in slots:
        for m in machines:
            model.continuous(s(b, m))
            model.continuous(p(b, m))
            model.continuous(cb(b, m))
    for job in inst.jobs:
        model.continuous(c(job.id))

    model.set_objective((job.weight, c(job.id)) for job in inst.jobs)

    for job in inst.jobs:
        model.add_constraint(
            f"assign_job[{job.id}]",
            [(1, x(job.id, b, m)) for b in slots for m in machines],
            Sense.EQ,
            1,
        )
    for b in slots:
        for m in machines:
            model.add_constraint(
                f"one_family[{b},{m}]", [(1, y(f, b, m)) for f in families], Sense.LE, 1
            )
    for f in families:
        for j in inst.family_members[f]:
            for b in slots:
                for m in machines:
                    model.add_constraint(
                        f"slot_family[{f},{j},{b},{m}]",
                        [(1, x(j, b, m)), (-1, y(f, b, m))],
                        Sense.LE,
                        0,
                    )
    for b in slots:
        for m in machines:
            for f in families:
                assigned = [(1, x(j, b, m)) for j in inst.family_members[f]]
                model.add_constraint(
                    f"min_size[{b},{m},{f}]",
                    assigned + [(-inst.bounds.min_size[f], y(f, b, m))],
                    Sense.GE,
                    0,
                )
                model.add_constraint(
                    f"max_size[{b},{m},{f}]",
                    assigned + [(-inst.bounds.max_size[f], y(f, b, m))],
                    Sense.LE,
                    0,
                )
    for b in slots:
        if b == 1:
            continue
        for m in machines:
            model.add_constraint(
                f"used_first[{b},{m}]",
                [(1, y(f, b - 1, m)) for f in families] + [(-1, y(f, b, m)) for f in families],
                Sense.GE,
                0,
            )
    for b in slots:
        for m in machines:
            model.add_constraint(
                f"slot_work[{b},{m}]",
                [(1, p(b, m))] + [(-job.processing, x(job.id, b, m)) for job in inst.jobs],
                Sense.GE,
                0,
            )
    for m in machines:
        model.add_constraint(
            f"initial_setup[{m}]",
            [(1, s(1, m))] + [(-inst.setups.initial[f], y(f, 1, m)) for f in families],
            Sense.GE,
            0,
        )
    for b in slots:
        if b == 1:
            continue
        for m in machines:
            for g in families:
                for f in families:
                    setup = inst.setups.between(g, f)
                    model.add_constraint(
                        f"setup[{b},{m},{g},{f}]",
                        [
                            (1, s(b, m)),
                            (-1, cb(b - 1, m)),
                            (-K, y(g, b - 1, m)),
                            (-K, y(f, b, m)),
                        ],
                        Sense.GE,
                        setup - 2 * K,
                    )
    for job in inst.jobs:
        for b in slots:
            for m in machines:
                model.add_constraint(
                    f"release[{job.id},{b},{m}]",
                    [(1, s(b, m)), (-job.release, x(job.id, b, m))],
                    Sense.GE,
                    0,
                )
    for b in slots:
        for m in machines:
            model.add_constraint(
                f"slot_completion[{b},{m}]",
                [(1, cb(b, m)), (-1, s(b, m)), (-1, p(b, m))],
                Sense.GE,
                0,
            )
    for job in inst.jobs:
        for b in slots:
            for m in machines:
                model.add_constraint(
                    f"batch_completion[{job.id},{b},{m}]",
                    [(1, c(job.id)), (-1, cb(b, m)), (-K, x(job.id, b, m))],
                    Sense.GE,
                    -K,
                )
    return model
