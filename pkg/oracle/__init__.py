from oracle.enumerate import enumerate_all_feasible, enumerate_optimal

__all__ = ["enumerate_all_feasible", "enumerate_optimal"]
