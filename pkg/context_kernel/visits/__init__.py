# context_kernel.visits package

from context_kernel.visits.dag import DagVisit, VisitError, children, dag_visit

__all__ = ["DagVisit", "VisitError", "children", "dag_visit"]
