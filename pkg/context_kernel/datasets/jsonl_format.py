"""JSON-lines graph dataset format.

One graph per line::

    {"labels": ["C", "O"], "edges": [[0, 1]], "class": -1}
"""
from __future__ import annotations

from pathlib import Path

from context_kernel.datasets.graph import Dataset, Graph, GraphFormatError, validate
from context_kernel.utils.jsonl import JsonlError, iter_jsonl, write_jsonl


def _graph_from_record(record: dict, path: Path, line_no: int) -> tuple[Graph, int]:
    def fail(message: str) -> GraphFormatError:
        return GraphFormatError(message, path=str(path), line_no=line_no)

    labels = record.get("labels")
    edges = record.get("edges", [])
    cls = record.get("class")
    if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
        raise fail("'labels' must be a list of strings")
    if not isinstance(edges, list) or not all(
        isinstance(e, list) and len(e) == 2 and all(type(i) is int for i in e) for e in edges
    ):
        raise fail("'edges' must be a list of [i, j] integer pairs")
    if type(cls) is not int or cls not in (-1, 1):
        raise fail(f"'class' must be -1 or 1, got {cls!r}")

    n = len(labels)
    for i, j in edges:
        if i == j:
            raise fail(f"self-loop on node {i}")
        if not (0 <= i < n and 0 <= j < n):
            raise fail(f"edge [{i}, {j}] out of range for {n} nodes")

    graph = Graph.from_edges(labels, edges)
    problems = validate(graph)
    if problems:
        raise fail(problems[0])
    return graph, cls


def parse_jsonl_dataset(path: str | Path, name: str | None = None) -> Dataset:
    """Parse a JSON-lines dataset in file order.

    Args:
        path: The ``.jsonl`` file.
        name: Dataset name; defaults to the file stem.

    Raises:
        GraphFormatError: Malformed line, self-loop or index out of range,
            with the 1-based line number.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Dataset file not found: {path}")

    graphs: list[Graph] = []
    classes: list[int] = []
    try:
        for line_no, record in iter_jsonl(path):
            graph, cls = _graph_from_record(record, path, line_no)
            graphs.append(graph)
            classes.append(cls)
    except JsonlError as exc:
        raise GraphFormatError(exc.message, path=str(exc.path), line_no=exc.line_no) from exc

    return Dataset(name=name or path.stem, graphs=tuple(graphs), labels=tuple(classes))


def dataset_records(dataset: Dataset) -> list[dict]:
    return [
        {"labels": list(g.labels), "edges": [list(e) for e in g.edges], "class": y}
        for g, y in zip(dataset.graphs, dataset.labels)
    ]


def write_jsonl_dataset(dataset: Dataset, path: str | Path) -> None:
    """Write ``dataset`` so that :func:`parse_jsonl_dataset` reads it back unchanged."""
    write_jsonl(path, dataset_records(dataset))
