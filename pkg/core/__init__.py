from core.feasibility import check_feasibility, evaluate_twct
from core.timing import left_shift_timing, sequencing_twct
from core.validation import (
    can_partition,
    infeasible_families,
    max_batch_counts,
    structural_violations,
    validate_instance,
)

__all__ = [
    "can_partition",
    "check_feasibility",
    "evaluate_twct",
    "infeasible_families",
    "left_shift_timing",
    "max_batch_counts",
    "sequencing_twct",
    "structural_violations",
    "validate_instance",
]
