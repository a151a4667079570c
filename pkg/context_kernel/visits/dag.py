"""Depth-limited shortest-path DAG visits.

``dag_visit(graph, v, h)`` is the DAG of all shortest paths of length at most
``h`` that start at ``v``. Every reached graph node appears once; ``n_sp``
counts how many distinct shortest paths reach it from the root.
"""
from __future__ import annotations

from dataclasses import dataclass

from context_kernel.datasets.graph import Graph


ABSENT = -1


class VisitError(ValueError):
    """Root or node index outside the visit."""


@dataclass(frozen=True)
class DagVisit:
    """Shortest-path DAG of one root, indexed by graph node.

    ``depth[u]`` is ``ABSENT`` for nodes farther than ``height`` from the
    root; those nodes have ``n_sp[u] == 0`` and no successors.
    """

    root: int
    height: int
    depth: tuple[int, ...]
    n_sp: tuple[int, ...]
    successors: tuple[tuple[int, ...], ...]
    order: tuple[int, ...]  # reverse topological: descending depth, then ascending index

    @property
    def diam(self) -> int:
        return self.depth[self.order[0]]

    @property
    def nodes(self) -> tuple[int, ...]:
        return tuple(sorted(self.order))

    def contains(self, u: int) -> bool:
        return 0 <= u < len(self.depth) and self.depth[u] != ABSENT

    def dag_edges(self) -> list[tuple[int, int]]:
        return [(u, w) for u in self.nodes for w in self.successors[u]]

    def children(self, u: int) -> tuple[int, ...]:
        return children(self, u)

    def validate(self) -> list[str]:
        """Walk the structure and list every violated DagVisit invariant."""
        problems: list[str] = []
        if self.depth[self.root] != 0 or self.n_sp[self.root] != 1:
            problems.append("root must have depth 0 and n_sp 1")
        parents: dict[int, list[int]] = {u: [] for u in self.order}
        for u, w in self.dag_edges():
            if self.depth[w] != self.depth[u] + 1:
                problems.append(f"edge {u}->{w} does not go one level down")
            parents[w].append(u)
        for u in self.order:
            if self.depth[u] > self.height:
                problems.append(f"node {u} deeper than height {self.height}")
            if u != self.root and self.n_sp[u] != sum(self.n_sp[p] for p in parents[u]):
                problems.append(f"n_sp({u}) is not the sum over its DAG parents")
        position = {u: i for i, u in enumerate(self.order)}
        for u, w in self.dag_edges():
            if position[w] > position[u]:
                problems.append(f"order visits parent {u} before child {w}")
        if self.diam > self.height:
            problems.append("diam exceeds height")
        return problems


def dag_visit(graph: Graph, root: int, h: int) -> DagVisit:
    """Build ``DAG_h(root, graph)`` by breadth-first levels.

    Args:
        graph: The source graph.
        root: Root node index.
        h: Maximum depth (hop count) kept in the DAG, ``h >= 0``.

    Returns:
        The visit, with path multiplicities accumulated top-down.

    Raises:
        VisitError: ``root`` is not a node of ``graph``.
        ValueError: ``h`` is negative.
    """
    n = graph.n_nodes
    if not 0 <= root < n:
        raise VisitError(f"root {root} outside [0, {n})")
    if h < 0:
        raise ValueError(f"h must be >= 0, got {h}")

    depth = [ABSENT] * n
    n_sp = [0] * n
    successors: list[list[int]] = [[] for _ in range(n)]
    depth[root] = 0
    n_sp[root] = 1
    levels = [[root]]

    for level in range(h):
        frontier: list[int] = []
        for u in levels[level]:
            for w in graph.neighbors(u):
                if depth[w] == ABSENT:
                    depth[w] = level + 1
                    frontier.append(w)
                if depth[w] == level + 1:
                    successors[u].append(w)
                    n_sp[w] += n_sp[u]
        if not frontier:
            break
        levels.append(sorted(frontier))

    order = tuple(u for level in reversed(levels) for u in level)
    return DagVisit(
        root=root,
        height=h,
        depth=tuple(depth),
        n_sp=tuple(n_sp),
        successors=tuple(tuple(s) for s in successors),
        order=order,
    )


def children(visit: DagVisit, u: int) -> tuple[int, ...]:
    """DAG successors of ``u`` in ascending node index.

    Raises:
        VisitError: ``u`` is not part of the visit.
    """
    if not visit.contains(u):
        raise VisitError(f"node {u} is not in the visit rooted at {visit.root}")
    return visit.successors[u]


def format_visit(graph: Graph, visit: DagVisit) -> str:
    """Human-readable dump for the ``visit`` command."""
    lines = [f"root={visit.root} height={visit.height} diam={visit.diam}"]
    for u in visit.nodes:
        kids = ",".join(str(w) for w in visit.successors[u]) or "-"
        lines.append(
            f"  node {u:>4}  label={graph.labels[u]:<6} depth={visit.depth[u]}  n_sp={visit.n_sp[u]}  children={kids}"
        )
    lines.append("order: " + " ".join(str(u) for u in visit.order))
    return "\n".join(lines)
