from common.models import Instance
from core.validation import max_batch_counts


def default_big_k(inst: Instance) -> int:
    """Horizon used to switch off conditional rows.

    Latest release, plus the longest initial setup, all the work and one
    longest setup per possible batch. No completion of a left-shifted schedule
    plus one setup exceeds it.
    """
    batches = max_batch_counts(inst, sizing_enabled=True).total
    return (
        max(job.release for job in inst.jobs)
        + inst.setups.max_initial
        + sum(job.processing for job in inst.jobs)
        + batches * inst.setups.max_inter
    )
