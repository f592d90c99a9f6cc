"""Instance invariants and batch-count arithmetic."""

from typing import List, NamedTuple, Tuple

from common.models import Instance, Violation


class BatchCounts(NamedTuple):
    per_family: Tuple[int, ...]
    total: int


def can_partition(count: int, lower: int, upper: int) -> bool:
    """True when `count` jobs split into batches whose sizes lie in [lower, upper].

    Zero jobs need zero batches. Otherwise some k >= 1 with k*lower <= count <= k*upper
    must exist, i.e. ceil(count / upper) <= floor(count / lower).
    """
    if count == 0:
        return True
    if lower < 1 or upper < lower:
        return False
    return -(-count // upper) <= count // lower


def infeasible_families(inst: Instance) -> List[int]:
    """Families whose jobs cannot be partitioned under the size bounds"""
    return [
        family
        for family in range(inst.num_families)
        if not can_partition(
            inst.family_size(family),
            inst.bounds.min_size[family],
            inst.bounds.max_size[family],
        )
    ]


def max_batch_counts(inst: Instance, sizing_enabled: bool) -> BatchCounts:
    """Upper bound on the number of batches of each family.

    With sizing every batch holds at least l_f jobs; without it a batch may hold a
    single job.
    """
    counts = []
    for family in range(inst.num_families):
        size = inst.family_size(family)
        counts.append(size // inst.bounds.min_size[family] if sizing_enabled else size)
    return BatchCounts(tuple(counts), sum(counts))


def _check_jobs(inst: Instance, violations: List[Violation]) -> None:
    seen = set()
    for job in inst.jobs:
        if job.id < 0:
            violations.append(Violation(rule="job-id", detail=f"job {job.id} has a negative id"))
        if job.id in seen:
            violations.append(Violation(rule="job-id", detail=f"job id {job.id} is duplicated"))
        seen.add(job.id)
        if job.weight < 1:
            violations.append(
                Violation(rule="weight", detail=f"job {job.id} weight {job.weight} < 1")
            )
        if job.release < 0:
            violations.append(
                Violation(rule="release", detail=f"job {job.id} release {job.release} < 0")
            )
        if job.processing < 1:
            violations.append(
                Violation(
                    rule="processing",
                    detail=f"job {job.id} processing {job.processing} < 1",
                )
            )
        if not 0 <= job.family < inst.num_families:
            violations.append(
                Violation(
                    rule="family",
                    detail=f"job {job.id} family {job.family} outside [0, {inst.num_families})",
                )
            )


def _check_setups(inst: Instance, violations: List[Violation]) -> bool:
    n = inst.num_families
    inter = inst.setups.inter
    initial = inst.setups.initial
    if len(inter) != n or any(len(row) != n for row in inter) or len(initial) != n:
        violations.append(
            Violation(
                rule="setup-shape",
                detail=f"setup matrix must be {n}x{n} with {n} initial setups",
            )
        )
        return False

    for f in range(n):
        if initial[f] < 0:
            violations.append(
                Violation(rule="setup-negative", detail=f"initial setup of family {f} is negative")
            )
        for g in range(n):
            if inter[f][g] < 0:
                violations.append(
                    Violation(rule="setup-negative", detail=f"setup {f}->{g} is negative")
                )
        if inter[f][f] != 0:
            violations.append(
                Violation(rule="setup-diagonal", detail=f"setup {f}->{f} is {inter[f][f]}, not 0")
            )

    for f in range(n):
        for g in range(n):
            for h in range(n):
                if inter[f][h] > inter[f][g] + inter[g][h]:
                    violations.append(
                        Violation(
                            rule="triangle",
                            detail=(
                                f"families ({f},{g},{h}): setup {f}->{h} = {inter[f][h]} "
                                f"> {inter[f][g]} + {inter[g][h]}"
                            ),
                        )
                    )
    for g in range(n):
        for h in range(n):
            if g != h and initial[h] > initial[g] + inter[g][h]:
                violations.append(
                    Violation(
                        rule="initial-triangle",
                        detail=(
                            f"initial setup of {h} = {initial[h]} "
                            f"> {initial[g]} + setup {g}->{h} = {inter[g][h]}"
                        ),
                    )
                )
    return True


def _check_bounds(inst: Instance, violations: List[Violation]) -> None:
    n = inst.num_families
    lower = inst.bounds.min_size
    upper = inst.bounds.max_size
    if len(lower) != n or len(upper) != n:
        violations.append(
            Violation(rule="bounds-shape", detail=f"batch size bounds must have {n} entries")
        )
        return
    for f in range(n):
        if lower[f] < 1 or upper[f] < lower[f]:
            violations.append(
                Violation(
                    rule="bound-order",
                    detail=f"family {f}: need 0 < min {lower[f]} <= max {upper[f]}",
                )
            )
        elif lower[f] > inst.family_size(f):
            violations.append(
                Violation(
                    rule="bound-reach",
                    detail=f"family {f}: min {lower[f]} exceeds its {inst.family_size(f)} jobs",
                )
            )


def validate_instance(inst: Instance) -> List[Violation]:
    """Check every instance invariant; an empty list means the instance is valid"""
    violations: List[Violation] = []

    if inst.num_machines < 1:
        violations.append(Violation(rule="machines", detail="at least one machine is required"))
    if inst.num_families < 1:
        violations.append(Violation(rule="families", detail="at least one family is required"))
        return violations

    _check_jobs(inst, violations)

    for family, members in enumerate(inst.family_members):
        if not members:
            violations.append(
                Violation(rule="empty-family", detail=f"family {family} has no jobs")
            )

    _check_setups(inst, violations)
    _check_bounds(inst, violations)
    return violations


def structural_violations(inst: Instance) -> List[Violation]:
    """Violations that make an instance unusable whatever the batch sizing.

    An unreachable minimum batch size is left out: it is an infeasibility of the
    sizing, reported by the solvers as InfeasibleInstance.
    """
    return [v for v in validate_instance(inst) if v.rule != "bound-reach"]
