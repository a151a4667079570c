"""Materialized tree-visits ``T_j(v)``.

The DAG visit is unfolded into a tree: a node reached by several shortest
paths is copied once per path. Sizes grow exponentially with height, so a
node budget guards every unfolding. Test-only code.
"""
from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass

from context_kernel.datasets.graph import Graph
from context_kernel.features.encoding import CLOSE, OPEN, SEP
from context_kernel.visits.dag import DagVisit, dag_visit


DEFAULT_BUDGET = 10**6


class BudgetExceededError(RuntimeError):
    """Unfolding would create more tree nodes than the budget allows."""

    def __init__(self, needed: int, budget: int) -> None:
        super().__init__(f"tree-visit needs {needed} nodes, budget is {budget}")
        self.needed = needed
        self.budget = budget


@dataclass(frozen=True)
class TreeNode:
    """Node of a tree-visit; ``children`` are in canonical order."""

    vertex: int
    label: str
    children: tuple[TreeNode, ...]
    canonical: str
    size: int

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def walk(self) -> Iterator[TreeNode]:
        """Pre-order over the proper subtrees rooted at every node."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))


def canonical_string(label: str, child_canonicals: list[str]) -> str:
    """Nested canonical form: ``label`` or ``label⌈c1#c2...⌋`` with children sorted."""
    if not child_canonicals:
        return label
    return f"{label}{OPEN}{SEP.join(sorted(child_canonicals))}{CLOSE}"


def _unfold(graph: Graph, visit: DagVisit, u: int) -> TreeNode:
    kids = sorted((_unfold(graph, visit, w) for w in visit.successors[u]), key=lambda t: t.canonical)
    return TreeNode(
        vertex=u,
        label=graph.labels[u],
        children=tuple(kids),
        canonical=canonical_string(graph.labels[u], [k.canonical for k in kids]),
        size=1 + sum(k.size for k in kids),
    )


def tree_visit(graph: Graph, v: int, j: int, budget: int = DEFAULT_BUDGET) -> TreeNode:
    """Unfold ``DAG_j(v)`` into the tree-visit ``T_j(v)``.

    Raises:
        VisitError: ``v`` is not a node of ``graph``.
        BudgetExceededError: The tree would exceed ``budget`` nodes.
    """
    visit = dag_visit(graph, v, j)
    needed = sum(visit.n_sp[u] for u in visit.order)
    if needed > budget:
        raise BudgetExceededError(needed, budget)
    return _unfold(graph, visit, v)


def visit_trees(graph: Graph, h: int, budget: int = DEFAULT_BUDGET) -> Iterator[tuple[int, int, TreeNode]]:
    """Every ``(v, j, T_j(v))`` with ``j = 0..diam(DAG_h(v))``.

    This is the range of heights the explicit feature maps cover.
    """
    for v in range(graph.n_nodes):
        diam = dag_visit(graph, v, h).diam
        for j in range(diam + 1):
            yield v, j, tree_visit(graph, v, j, budget)
