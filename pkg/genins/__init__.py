from genins.generator import (
    GenSpec,
    cmax_lower_bound,
    derive_min_batch_sizes,
    gen_instance,
    gen_setup_matrix,
    make_rng,
)
from genins.suite import InstanceClass, default_grid, gen_suite

__all__ = [
    "GenSpec",
    "InstanceClass",
    "cmax_lower_bound",
    "default_grid",
    "derive_min_batch_sizes",
    "gen_instance",
    "gen_setup_matrix",
    "gen_suite",
    "make_rng",
]
