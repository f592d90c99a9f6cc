from milp.checker import AssignmentReport, check_assignment
from milp.horizon import default_big_k
from milp.lp_format import read_lp, write_lp
from milp.model import MilpModel
from milp.pa import encode_pa
from milp.rp import encode_rp
from milp.translate import schedule_to_pa_assignment, schedule_to_rp_assignment

__all__ = [
    "AssignmentReport",
    "MilpModel",
    "check_assignment",
    "default_big_k",
    "encode_pa",
    "encode_rp",
    "read_lp",
    "schedule_to_pa_assignment",
    "schedule_to_rp_assignment",
    "write_lp",
]
