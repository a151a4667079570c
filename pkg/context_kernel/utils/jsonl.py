"""JSONL read/write utilities."""
from __future__ import annotations

import json
from collections.abc import Iterable, Iterator
from pathlib import Path
from typing import Any


class JsonlError(ValueError):
    """A JSONL line could not be decoded into an object."""

    def __init__(self, path: Path, line_no: int, message: str) -> None:
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = path
        self.line_no = line_no
        self.message = message


def write_jsonl(path: str | Path, records: Iterable[dict[str, Any]]) -> None:
    """Write records to a JSONL file.

    Each record is written as a single-line JSON object with sorted keys,
    UTF-8 encoding, and newline termination.

    Args:
        path: Output file path. Parent directories are created if needed.
        records: Dictionaries to write, in order.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as f:
        for record in records:
            line = json.dumps(record, sort_keys=True, ensure_ascii=False)
            f.write(line + "\n")


def iter_jsonl(path: str | Path) -> Iterator[tuple[int, dict[str, Any]]]:
    """Yield ``(line_no, record)`` pairs from a JSONL file.

    Blank lines are skipped; line numbers are 1-based and count blank lines.

    Raises:
        JsonlError: If a line is not valid JSON or not a JSON object.
    """
    path = Path(path)
    with path.open("r", encoding="utf-8") as f:
        for line_no, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise JsonlError(path, line_no, f"malformed JSON ({exc.msg})") from exc
            if not isinstance(record, dict):
                raise JsonlError(path, line_no, "expected a JSON object")
            yield line_no, record


def read_jsonl(path: str | Path) -> list[dict[str, Any]]:
    """Read records from a JSONL file.

    Args:
        path: Input file path.

    Returns:
        List of dictionaries parsed from the file.
    """
    return [record for _, record in iter_jsonl(path)]


def write_json(path: str | Path, payload: Any) -> None:
    """Write one JSON document with the project's conventions (indent=2, sorted keys)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
