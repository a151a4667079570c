"""Path utilities and artifact location constants."""
from __future__ import annotations

from pathlib import Path

# Project root (resolved at import time)
PROJECT_ROOT = Path(__file__).resolve().parent.parent.parent

# Results directory
RESULTS_DIR = PROJECT_ROOT / "results"

# Input datasets (not bundled; TU directories or JSONL files go here)
DATA_DIR = PROJECT_ROOT / "data"


def dataset_dirname(name: str) -> str:
    """Convert a dataset name to a filesystem-safe directory name.

    Args:
        name: Dataset name (e.g., "CPDB" or "my set/v2").

    Returns:
        Safe directory name (e.g., "CPDB", "my_set__v2").
    """
    return name.replace("/", "__").replace(" ", "_")


def default_output(dataset_name: str, kind: str, suffix: str) -> Path:
    """Default output path for a subcommand artifact.

    Args:
        dataset_name: Name of the dataset the artifact was computed on.
        kind: Artifact kind ("gram", "features", "cv", "bench", ...).
        suffix: File suffix including the dot.

    Returns:
        ``results/<dataset>/<kind><suffix>``.
    """
    return RESULTS_DIR / dataset_dirname(dataset_name) / f"{kind}{suffix}"


def sidecar_path(path: str | Path, tag: str) -> Path:
    """Path of a sidecar file next to ``path`` (``K.csv`` -> ``K.csv.<tag>``)."""
    path = Path(path)
    return path.with_name(f"{path.name}.{tag}")
