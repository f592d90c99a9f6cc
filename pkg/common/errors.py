"""Domain errors raised across the toolkit."""


class SBatchError(Exception):
    """Base class for every error raised on purpose by this package"""


class InfeasibleInstance(SBatchError):
    """The batch size bounds admit no partition of some family"""

    def __init__(self, families):
        self.families = list(families)
        super().__init__(f"no feasible batch partition for families {self.families}")


class InvalidSchedule(SBatchError):
    """An operation that requires a feasible schedule got an infeasible one"""

    def __init__(self, violations):
        self.violations = list(violations)
        rules = sorted({v.rule for v in self.violations})
        super().__init__(f"schedule is infeasible: {', '.join(rules)}")


class CapExceeded(SBatchError):
    """Instance is too large for exhaustive enumeration"""


class CapacityExceeded(SBatchError):
    """A schedule uses more batches than the formulation provides"""


class MissingVariable(SBatchError):
    """An assignment does not cover every model variable"""

    def __init__(self, names):
        self.names = list(names)
        shown = ", ".join(self.names[:5])
        more = "" if len(self.names) <= 5 else f" (+{len(self.names) - 5} more)"
        super().__init__(f"assignment misses variables: {shown}{more}")


class RestartLimit(SBatchError):
    """Setup matrix generation kept producing symmetric matrices"""

    def __init__(self, seed, attempts):
        self.seed = seed
        self.attempts = attempts
        super().__init__(
            f"setup matrix still symmetric after {attempts} restarts (seed {seed})"
        )


class CoreBudgetExceeded(SBatchError):
    """The sizing-free solve used to derive batch sizes found no schedule"""


class NoIncumbent(SBatchError):
    """A metric was requested for a run without an incumbent"""


class LpParseError(SBatchError):
    """LP text could not be parsed"""


class InvalidInstance(SBatchError):
    """An instance breaks structural rules (shapes, signs, triangle inequality)"""

    def __init__(self, violations):
        self.violations = list(violations)
        rules = sorted({v.rule for v in self.violations})
        super().__init__(f"invalid instance: {', '.join(rules)}")
