# context_kernel.datasets package

from pathlib import Path

from context_kernel.datasets.graph import Dataset, Graph, GraphFormatError, validate
from context_kernel.datasets.jsonl_format import parse_jsonl_dataset, write_jsonl_dataset
from context_kernel.datasets.tu_format import parse_tu_dataset

DATASET_FORMATS = ("tu", "jsonl")


def load_dataset(path: str | Path, fmt: str) -> Dataset:
    """Load a dataset in one of :data:`DATASET_FORMATS`."""
    if fmt == "tu":
        return parse_tu_dataset(path)
    if fmt == "jsonl":
        return parse_jsonl_dataset(path)
    raise ValueError(f"Unknown dataset format: {fmt!r} (expected one of {DATASET_FORMATS})")


__all__ = [
    "DATASET_FORMATS",
    "Dataset",
    "Graph",
    "GraphFormatError",
    "load_dataset",
    "parse_jsonl_dataset",
    "parse_tu_dataset",
    "validate",
    "write_jsonl_dataset",
]
