"""Load and summarize CV reports and benchmark timings."""

from __future__ import annotations

import csv
import json
import sys
from collections.abc import Iterable
from pathlib import Path

from context_kernel.evaluation.nested_cv import CvReport


BENCH_COLUMNS = ["kernel", "h", "lambda", "extract_seconds", "fill_seconds", "total_seconds"]


def load_reports(paths: Iterable[str | Path]) -> list[CvReport]:
    """Load CV report files, skipping (with a warning) the ones that do not parse."""
    reports = []
    for path in paths:
        try:
            reports.append(CvReport.load(path))
        except (OSError, json.JSONDecodeError, TypeError, KeyError) as exc:
            print(f"[summarize] WARNING: skipping {path}: {exc}", file=sys.stderr)
    return reports


def format_accuracy(mean: float, std: float) -> str:
    """Percentages with two decimals, e.g. ``78.89 ± 0.98``."""
    return f"{100 * mean:.2f} ± {100 * std:.2f}"


def accuracy_table(reports: list[CvReport]) -> tuple[list[str], list[list[str]]]:
    """Kernel × dataset table of ``mean ± std`` accuracies.

    Returns:
        (header, rows). Rows follow the first appearance of each kernel;
        columns are datasets in sorted order. Missing cells are empty.
    """
    datasets = sorted({r.dataset for r in reports})
    kernels: list[str] = []
    cells: dict[tuple[str, str], str] = {}
    for r in reports:
        if r.kernel not in kernels:
            kernels.append(r.kernel)
        cells[(r.kernel, r.dataset)] = format_accuracy(r.mean, r.std)
    header = ["kernel", *datasets]
    rows = [[k, *(cells.get((k, d), "") for d in datasets)] for k in kernels]
    return header, rows


def write_csv(path: str | Path, header: list[str], rows: list[list]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def load_bench(path: str | Path) -> list[dict]:
    with Path(path).open("r", encoding="utf-8", newline="") as f:
        return [
            {
                "kernel": row["kernel"],
                "h": int(row["h"]),
                "lambda": float(row["lambda"]),
                "extract_seconds": float(row["extract_seconds"]),
                "fill_seconds": float(row["fill_seconds"]),
                "total_seconds": float(row["total_seconds"]),
            }
            for row in csv.DictReader(f)
        ]


def bench_ratios(rows: list[dict], numerator: str = "tck", denominator: str = "odd") -> list[dict]:
    """Per (h, λ) ratio of total Gram time between two kernel families."""
    totals = {(r["kernel"], r["h"], r["lambda"]): r["total_seconds"] for r in rows}
    out = []
    for (kernel, h, lam), seconds in sorted(totals.items(), key=lambda kv: (kv[0][1], kv[0][2], kv[0][0])):
        if kernel != numerator:
            continue
        base = totals.get((denominator, h, lam))
        if base is None:
            continue
        out.append({"h": h, "lambda": lam, "ratio": seconds / base if base > 0 else float("inf")})
    return out


def summarize(report_paths: list[str | Path], out: str | Path, bench: str | Path | None = None) -> int:
    """Write the accuracy table (and bench ratios) and print them.

    Returns:
        Number of reports summarized.
    """
    reports = load_reports(report_paths)
    header, rows = accuracy_table(reports)
    write_csv(out, header, rows)
    print(f"[summarize] {len(reports)} reports -> {out}")
    for row in [header, *rows]:
        print("  " + " | ".join(f"{cell:<16}" for cell in row))

    if bench is not None:
        ratios = bench_ratios(load_bench(bench))
        ratio_path = Path(out).with_name(Path(out).stem + "_bench_ratios.csv")
        write_csv(ratio_path, ["h", "lambda", "tck_over_odd"], [[r["h"], r["lambda"], f"{r['ratio']:.4f}"] for r in ratios])
        print(f"[summarize] bench ratios -> {ratio_path}")
        for r in ratios:
            print(f"  h={r['h']:<3} λ={r['lambda']:<5} TCK/ODD = {r['ratio']:.3f}")
    return len(reports)
