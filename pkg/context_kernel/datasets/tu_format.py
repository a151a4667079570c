"""Reader for the multi-file TU graph-dataset layout.

A dataset ``DS`` lives in one directory holding:

- ``DS_A.txt``: one edge per line, ``i, j`` with 1-based global node ids
- ``DS_graph_indicator.txt``: graph id (1-based) of node ``i`` on line ``i``
- ``DS_node_labels.txt``: integer label of node ``i`` on line ``i``
- ``DS_graph_labels.txt``: class label of graph ``g`` on line ``g``

Separators may be ``", "`` or ``","``; line endings LF or CRLF.
"""
from __future__ import annotations

from pathlib import Path

from context_kernel.datasets.graph import Dataset, Graph, GraphFormatError


TU_SUFFIXES = ("_A.txt", "_graph_indicator.txt", "_node_labels.txt", "_graph_labels.txt")


def _dataset_prefix(directory: Path) -> str:
    """Find ``DS`` such that ``DS_A.txt`` exists in ``directory``."""
    if (directory / f"{directory.name}_A.txt").exists():
        return directory.name
    candidates = sorted(p.name[: -len("_A.txt")] for p in directory.glob("*_A.txt"))
    if len(candidates) == 1:
        return candidates[0]
    if not candidates:
        raise FileNotFoundError(f"No *_A.txt edge file found in {directory}")
    raise GraphFormatError(f"Ambiguous TU directory, several edge files: {candidates}", path=str(directory))


def _read_lines(path: Path) -> list[tuple[int, str]]:
    """Return ``(line_no, stripped_text)`` for every non-blank line."""
    if not path.exists():
        raise FileNotFoundError(f"TU file not found: {path}")
    try:
        text = path.read_text(encoding="ascii")
    except UnicodeDecodeError as exc:
        line_no = exc.object[: exc.start].count(b"\n") + 1
        raise GraphFormatError(f"non-ASCII byte at offset {exc.start}", path=str(path), line_no=line_no) from None
    return [(no, line.strip()) for no, line in enumerate(text.splitlines(), start=1) if line.strip()]


def _read_ints(path: Path) -> list[tuple[int, int]]:
    rows = []
    for line_no, text in _read_lines(path):
        try:
            rows.append((line_no, int(text)))
        except ValueError:
            raise GraphFormatError(f"expected an integer, got {text!r}", path=str(path), line_no=line_no) from None
    return rows


def map_class_labels(raw: list[int]) -> list[int]:
    """Map raw class labels onto {-1, +1}.

    Labels already in {-1, +1} are kept. Two distinct values map the smaller
    to -1 and the larger to +1. A single value maps to +1 if positive, else -1.
    """
    distinct = sorted(set(raw))
    if set(distinct) <= {-1, 1}:
        return list(raw)
    if len(distinct) == 1:
        return [1 if distinct[0] > 0 else -1] * len(raw)
    if len(distinct) == 2:
        low = distinct[0]
        return [-1 if y == low else 1 for y in raw]
    raise GraphFormatError(f"binary classification needs at most 2 class labels, found {distinct}")


def parse_tu_dataset(directory: str | Path, name: str | None = None) -> Dataset:
    """Parse a TU-format dataset directory.

    Args:
        directory: Directory containing the four ``DS_*.txt`` files.
        name: Dataset name; defaults to the ``DS`` prefix.

    Returns:
        Dataset with per-graph local node indices, integer node labels
        rendered as decimal strings and class labels mapped to {-1, +1}.

    Raises:
        FileNotFoundError: A required file is missing.
        GraphFormatError: Bad ids, cross-graph edges, self-loops (with line number).
    """
    directory = Path(directory)
    prefix = _dataset_prefix(directory)
    paths = {suffix: directory / f"{prefix}{suffix}" for suffix in TU_SUFFIXES}

    indicator = _read_ints(paths["_graph_indicator.txt"])
    node_labels = _read_ints(paths["_node_labels.txt"])
    graph_labels = _read_ints(paths["_graph_labels.txt"])

    n_nodes = len(indicator)
    n_graphs = len(graph_labels)
    if len(node_labels) != n_nodes:
        raise GraphFormatError(
            f"{len(node_labels)} node labels for {n_nodes} nodes", path=str(paths["_node_labels.txt"])
        )

    # Global node id (0-based) -> (graph index, local index)
    owner: list[tuple[int, int]] = []
    labels_per_graph: list[list[str]] = [[] for _ in range(n_graphs)]
    for (line_no, graph_id), (_, label) in zip(indicator, node_labels):
        if not 1 <= graph_id <= n_graphs:
            raise GraphFormatError(
                f"graph id {graph_id} outside 1..{n_graphs}",
                path=str(paths["_graph_indicator.txt"]),
                line_no=line_no,
            )
        g = graph_id - 1
        owner.append((g, len(labels_per_graph[g])))
        labels_per_graph[g].append(str(label))

    edges_per_graph: list[set[tuple[int, int]]] = [set() for _ in range(n_graphs)]
    edge_path = paths["_A.txt"]
    for line_no, text in _read_lines(edge_path):
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 2:
            raise GraphFormatError(f"expected 'i, j', got {text!r}", path=str(edge_path), line_no=line_no)
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"non-integer node id in {text!r}", path=str(edge_path), line_no=line_no) from None
        for node_id in (a, b):
            if not 1 <= node_id <= n_nodes:
                raise GraphFormatError(
                    f"node id {node_id} outside 1..{n_nodes}", path=str(edge_path), line_no=line_no
                )
        if a == b:
            raise GraphFormatError(f"self-loop on node {a}", path=str(edge_path), line_no=line_no)
        (ga, la), (gb, lb) = owner[a - 1], owner[b - 1]
        if ga != gb:
            raise GraphFormatError(
                f"edge ({a}, {b}) crosses graphs {ga + 1} and {gb + 1}", path=str(edge_path), line_no=line_no
            )
        edges_per_graph[ga].add((min(la, lb), max(la, lb)))

    graphs = tuple(
        Graph(labels=tuple(labels), edges=tuple(sorted(edges)))
        for labels, edges in zip(labels_per_graph, edges_per_graph)
    )
    classes = map_class_labels([y for _, y in graph_labels])
    return Dataset(name=name or prefix, graphs=graphs, labels=tuple(classes))
