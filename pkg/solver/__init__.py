from solver.bounds import lower_bound
from solver.search import BranchAndBound, solve
from solver.symmetry import apply_symmetry_breaking

__all__ = ["BranchAndBound", "apply_symmetry_breaking", "lower_bound", "solve"]
