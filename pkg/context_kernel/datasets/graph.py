"""Graph and Dataset, the units the kernels operate on."""
from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property


# Symbols used by the subtree encodings; labels must never contain them.
RESERVED_SYMBOLS: tuple[str, ...] = ("⌈", "⌋", "#", "∘")

CLASS_LABELS: frozenset[int] = frozenset({-1, 1})


class GraphFormatError(ValueError):
    """Input data violates the graph or dataset format.

    ``path`` and ``line_no`` are set when the error comes from a file.
    """

    def __init__(self, message: str, *, path: str | None = None, line_no: int | None = None) -> None:
        location = ""
        if path is not None:
            location = f"{path}:{line_no}: " if line_no is not None else f"{path}: "
        super().__init__(location + message)
        self.path = path
        self.line_no = line_no


def label_violation(label: str) -> str | None:
    """Return why ``label`` is not a valid node label, or None if it is."""
    if not label:
        return "empty label"
    for symbol in RESERVED_SYMBOLS:
        if symbol in label:
            return f"label {label!r} contains reserved symbol {symbol!r}"
    return None


@dataclass(frozen=True)
class Graph:
    """Undirected node-labelled graph with dense node indices.

    ``edges`` holds each unordered pair once as ``(min, max)``, sorted.
    Build through :meth:`from_edges` to get that normal form.
    """

    labels: tuple[str, ...]
    edges: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_edges(cls, labels: Sequence[str], edges: Iterable[Sequence[int]]) -> Graph:
        """Normalize an edge list (either orientation, duplicates allowed)."""
        pairs = {(min(int(a), int(b)), max(int(a), int(b))) for a, b in edges}
        return cls(labels=tuple(str(x) for x in labels), edges=tuple(sorted(pairs)))

    @property
    def n_nodes(self) -> int:
        return len(self.labels)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Neighbour lists in ascending index order (symmetric by construction)."""
        neighbours: list[list[int]] = [[] for _ in range(self.n_nodes)]
        for a, b in self.edges:
            neighbours[a].append(b)
            neighbours[b].append(a)
        return tuple(tuple(sorted(ns)) for ns in neighbours)

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self.adjacency[u]

    def adjacent(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def permuted(self, perm: Sequence[int]) -> Graph:
        """Relabel node indices: old node ``i`` becomes new node ``perm[i]``."""
        if sorted(perm) != list(range(self.n_nodes)):
            raise ValueError("perm must be a permutation of the node indices")
        labels = [""] * self.n_nodes
        for old, new in enumerate(perm):
            labels[new] = self.labels[old]
        return Graph.from_edges(labels, [(perm[a], perm[b]) for a, b in self.edges])

    def to_dict(self) -> dict:
        return {"labels": list(self.labels), "edges": [list(e) for e in self.edges]}


def validate(graph: Graph) -> list[str]:
    """Check a graph against its invariants.

    An empty list means the graph is valid; otherwise the first entry is the
    first violated invariant (labels, then self-loops, then index range,
    then duplicates).

    Args:
        graph: The graph to check.

    Returns:
        List of human-readable violation strings.
    """
    violations: list[str] = []

    for i, label in enumerate(graph.labels):
        problem = label_violation(label)
        if problem:
            violations.append(f"node {i}: {problem}")

    n = graph.n_nodes
    seen: set[tuple[int, int]] = set()
    for a, b in graph.edges:
        if a == b:
            violations.append(f"self-loop on node {a}")
            continue
        if not (0 <= a < n and 0 <= b < n):
            violations.append(f"edge ({a}, {b}) references a node outside [0, {n})")
            continue
        key = (min(a, b), max(a, b))
        if key in seen:
            violations.append(f"edge ({a}, {b}) stored twice")
        seen.add(key)

    return violations


@dataclass(frozen=True)
class Dataset:
    """Labelled graph collection for binary classification."""

    name: str
    graphs: tuple[Graph, ...]
    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.graphs) != len(self.labels):
            raise GraphFormatError(
                f"dataset {self.name!r}: {len(self.graphs)} graphs but {len(self.labels)} class labels"
            )
        bad = [y for y in self.labels if y not in CLASS_LABELS]
        if bad:
            raise GraphFormatError(f"dataset {self.name!r}: class labels must be -1/+1, got {bad[0]!r}")
        for index, graph in enumerate(self.graphs):
            problems = validate(graph)
            if problems:
                raise GraphFormatError(f"dataset {self.name!r}, graph {index}: {problems[0]}")

    def __len__(self) -> int:
        return len(self.graphs)

    def alphabet(self) -> frozenset[str]:
        """All node labels appearing in the dataset."""
        return frozenset(label for g in self.graphs for label in g.labels)

    def subset(self, indices: Sequence[int], *, name: str | None = None) -> Dataset:
        return Dataset(
            name=name or self.name,
            graphs=tuple(self.graphs[i] for i in indices),
            labels=tuple(self.labels[i] for i in indices),
        )

    def class_counts(self) -> dict[int, int]:
        counts = {-1: 0, 1: 0}
        for y in self.labels:
            counts[y] += 1
        return counts
