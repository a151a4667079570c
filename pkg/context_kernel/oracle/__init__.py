# Definition-level reference kernels, used by tests and oracle-check.

from context_kernel.oracle.brute_force import brute_force_odd, brute_force_tck, c_st
from context_kernel.oracle.report import DiscrepancyReport, discrepancy_report
from context_kernel.oracle.tree_visit import BudgetExceededError, TreeNode, canonical_string as canonical, tree_visit

__all__ = [
    "BudgetExceededError",
    "DiscrepancyReport",
    "TreeNode",
    "brute_force_odd",
    "brute_force_tck",
    "c_st",
    "canonical",
    "discrepancy_report",
    "tree_visit",
]
