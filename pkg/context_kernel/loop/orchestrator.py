"""Subcommand orchestration for the contextkernel CLI.

One ``RunConfig`` describes a run; ``run(config)`` dispatches it, writes
machine-readable artifacts, prints a human summary and returns the exit
status. Every error category has its own exit code (see ``EXIT_CODES``).
"""
from __future__ import annotations

import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from context_kernel.datasets import Dataset, GraphFormatError, load_dataset
from context_kernel.datasets.synthetic import molecule_like_dataset, random_graphs
from context_kernel.evaluation.nested_cv import CvGrid, FoldError, nested_cv
from context_kernel.evaluation.svm import ConvergenceError, SvmError
from context_kernel.features.batch import extract_all
from context_kernel.features.encoding import EncodingError
from context_kernel.features.interner import FeatureInterner
from context_kernel.features.vector import (
    KERNEL_FAMILIES,
    KernelParams,
    SpaceMismatchError,
    SpaceTag,
    feature_stats,
    vectors_to_records,
)
from context_kernel.implicit.kernel import InternerMismatchError
from context_kernel.kernel.gram import ENGINES, GramError, check_gram, gram
from context_kernel.kernel.spectral import min_eigen_ratio
from context_kernel.oracle.report import COMPARISONS, discrepancy_report
from context_kernel.oracle.tree_visit import DEFAULT_BUDGET, BudgetExceededError
from context_kernel.report.summarize import BENCH_COLUMNS, bench_ratios, summarize, write_csv
from context_kernel.utils.jsonl import write_json, write_jsonl
from context_kernel.utils.paths import RESULTS_DIR, default_output, sidecar_path
from context_kernel.visits.dag import VisitError, dag_visit, format_visit


# ── configuration ──────────────────────────────────────────────


COMMANDS = ("validate", "features", "gram", "cv", "oracle-check", "bench", "visit", "summarize")
DATASET_COMMANDS = ("validate", "features", "gram", "cv", "visit")

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_DATASET = 3
EXIT_LABEL = 4
EXIT_KERNEL = 5
EXIT_ORACLE_BUDGET = 6
EXIT_SVM = 7

EXIT_CODES: dict[str, int] = {
    "ok": EXIT_OK,
    "unexpected": EXIT_UNEXPECTED,
    "config": EXIT_CONFIG,
    "dataset": EXIT_DATASET,
    "label": EXIT_LABEL,
    "kernel": EXIT_KERNEL,
    "oracle-budget": EXIT_ORACLE_BUDGET,
    "svm": EXIT_SVM,
}


class ConfigError(ValueError):
    """Invalid or incomplete run configuration."""


@dataclass
class RunConfig:
    """Everything one CLI invocation needs."""

    command: str
    dataset: str | None = None
    fmt: str = "tu"
    kernel: str = "tck"
    h: int = 3
    lam: float = 1.0
    engine: str = "explicit"
    out: str | None = None
    seed: int = 0
    threads: int = 1
    normalize: bool = False
    budget: int = DEFAULT_BUDGET
    verbose: bool = False

    # cv
    grid: str = "default"
    repeats: int = 10
    outer_folds: int = 10
    inner_folds: int = 10

    # oracle-check
    graphs: int = 50
    max_nodes: int = 10

    # bench
    synthetic: int | None = None
    kernels: list[str] = field(default_factory=lambda: ["odd", "tck"])
    heights: list[int] = field(default_factory=lambda: list(range(1, 11)))

    # visit
    graph_index: int = 0
    root: int = 0

    # summarize
    reports: list[str] = field(default_factory=list)
    bench: str | None = None

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r} (expected one of {COMMANDS})")
        if self.command in DATASET_COMMANDS and not self.dataset:
            raise ConfigError(f"{self.command} needs --dataset")
        if self.command == "bench" and not self.dataset and not self.synthetic:
            raise ConfigError("bench needs --dataset or --synthetic N")
        if self.command == "summarize" and not self.reports:
            raise ConfigError("summarize needs --reports")
        if self.fmt not in ("tu", "jsonl"):
            raise ConfigError(f"unknown dataset format {self.fmt!r}")
        if self.engine not in ENGINES:
            raise ConfigError(f"unknown engine {self.engine!r}")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.budget < 1:
            raise ConfigError("budget must be >= 1")
        try:
            KernelParams(h=self.h, lam=self.lam)
            for kernel in [self.kernel, *self.kernels]:
                SpaceTag.parse(kernel)
            for h in self.heights:
                KernelParams(h=h, lam=self.lam)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.repeats < 1 or self.outer_folds < 2 or self.inner_folds < 2:
            raise ConfigError("repeats must be >= 1 and fold counts >= 2")
        if self.graphs < 1 or self.max_nodes < 1:
            raise ConfigError("graphs and max_nodes must be >= 1")

    @property
    def params(self) -> KernelParams:
        return KernelParams(h=self.h, lam=self.lam)

    @property
    def space(self) -> SpaceTag:
        return SpaceTag.parse(self.kernel)

    def to_dict(self) -> dict:
        return asdict(self)


def _save_config(config: RunConfig, out: Path) -> None:
    write_json(sidecar_path(out, "config.json"), config.to_dict())


def _load(config: RunConfig) -> Dataset:
    dataset = load_dataset(config.dataset, config.fmt)
    if config.verbose:
        print(f"[dataset] {dataset.name}: {len(dataset)} graphs, classes {dataset.class_counts()}")
    return dataset


# ── subcommands ────────────────────────────────────────────────


def run_validate(config: RunConfig) -> int:
    dataset = _load(config)
    counts = dataset.class_counts()
    print(f"[validate] ok, {len(dataset)} graphs")
    print(f"  classes: -1={counts[-1]} +1={counts[1]}  alphabet: {len(dataset.alphabet())} labels")
    return EXIT_OK


def run_features(config: RunConfig) -> int:
    dataset = _load(config)
    interner = FeatureInterner()
    vectors = extract_all(dataset.graphs, config.space, config.params, interner, n_jobs=config.threads)
    out = Path(config.out) if config.out else default_output(dataset.name, f"features_{config.space.value}", ".jsonl")
    write_jsonl(out, vectors_to_records(vectors, interner))
    _save_config(config, out)

    stats = [feature_stats(v, interner) for v in vectors]
    nnz = [s.nnz for s in stats]
    print(f"[features] {config.space.value} h={config.h} λ={config.lam}: {len(interner)} distinct features")
    print(f"  per graph nnz: mean {np.mean(nnz):.1f}, max {max(nnz)}")
    if config.space in (SpaceTag.TCK, SpaceTag.TCK_ODD):
        print(f"  widest context set: {max(s.max_contexts for s in stats)}")
    print(f"[features] -> {out}")
    return EXIT_OK


def run_gram(config: RunConfig) -> int:
    dataset = _load(config)
    g = gram(
        dataset.graphs,
        config.space,
        config.params,
        engine=config.engine,
        n_jobs=config.threads,
        normalized=config.normalize,
        verbose=config.verbose,
    )
    out = Path(config.out) if config.out else default_output(dataset.name, f"gram_{config.space.value}_h{config.h}", ".csv")
    g.save(out)
    _save_config(config, out)
    for problem in check_gram(g):
        print(f"[gram] WARNING: {problem}", file=sys.stderr)
    print(f"[gram] {g.n}x{g.n} {config.space.value} ({config.engine}) -> {out}")
    print(f"  min eigen ratio: {min_eigen_ratio(g):.3e}  total {g.timing['total_seconds']:.3f}s")
    return EXIT_OK


def run_cv(config: RunConfig) -> int:
    dataset = _load(config)
    try:
        grid = CvGrid.load(config.grid)
    except (OSError, ValueError, KeyError) as exc:
        raise ConfigError(f"cannot read grid {config.grid!r}: {exc}") from None
    report = nested_cv(
        dataset,
        config.space,
        grid,
        outer_folds=config.outer_folds,
        inner_folds=config.inner_folds,
        repeats=config.repeats,
        seed=config.seed,
        normalized=config.normalize,
        engine=config.engine,
        n_jobs=config.threads,
        verbose=config.verbose,
    )
    out = Path(config.out) if config.out else default_output(dataset.name, f"cv_{config.space.value}", ".json")
    report.save(out)
    print(f"[cv] {dataset.name} {report.kernel}: {100 * report.mean:.2f} ± {100 * report.std:.2f} "
          f"({report.repeats} repeats x {report.outer_folds} folds) -> {out}")
    return EXIT_OK


def run_oracle_check(config: RunConfig) -> int:
    rng = np.random.default_rng(config.seed)
    graphs = random_graphs(rng, config.graphs, min_nodes=min(4, config.max_nodes), max_nodes=config.max_nodes)
    pairs = [(graphs[int(i)], graphs[int(j)]) for i, j in rng.integers(0, len(graphs), size=(config.graphs, 2))]
    report = discrepancy_report(pairs, config.params, budget=config.budget)

    print(f"[oracle] {len(pairs)} random pairs, ≤{config.max_nodes} nodes, seed {config.seed}")
    for line in report.summary_lines():
        print("  " + line)
    if config.out:
        write_json(config.out, report.to_dict())
        print(f"[oracle] -> {config.out}")

    failing = [name for name in COMPARISONS[:3] if report.comparisons[name].disagreements]
    if failing:
        print(f"[oracle] MISMATCH: {', '.join(failing)}", file=sys.stderr)
        return EXIT_KERNEL
    return EXIT_OK


def run_bench(config: RunConfig) -> int:
    if config.synthetic:
        dataset = molecule_like_dataset(np.random.default_rng(config.seed), config.synthetic)
    else:
        dataset = _load(config)

    rows = []
    for h in config.heights:
        for kernel in config.kernels:
            g = gram(dataset.graphs, kernel, KernelParams(h=h, lam=config.lam), n_jobs=config.threads)
            t = g.timing
            rows.append(
                {
                    "kernel": SpaceTag.parse(kernel).value,
                    "h": h,
                    "lambda": config.lam,
                    "extract_seconds": t["extract_seconds"],
                    "fill_seconds": t["fill_seconds"],
                    "total_seconds": t["total_seconds"],
                }
            )
            print(f"[bench] {kernel:<8} h={h:<3} extract {t['extract_seconds']:.3f}s  fill {t['fill_seconds']:.3f}s")

    out = Path(config.out) if config.out else default_output(dataset.name, "bench", ".csv")
    write_csv(out, BENCH_COLUMNS, [[r[c] for c in BENCH_COLUMNS] for r in rows])
    _save_config(config, out)
    for r in bench_ratios(rows):
        print(f"[bench] h={r['h']:<3} TCK/ODD total time ratio {r['ratio']:.3f}")
    print(f"[bench] {len(dataset)} graphs -> {out}")
    return EXIT_OK


def run_visit(config: RunConfig) -> int:
    dataset = _load(config)
    if not 0 <= config.graph_index < len(dataset):
        raise VisitError(f"graph {config.graph_index} outside [0, {len(dataset)})")
    graph = dataset.graphs[config.graph_index]
    print(f"[visit] graph {config.graph_index} of {dataset.name}")
    print(format_visit(graph, dag_visit(graph, config.root, config.h)))
    return EXIT_OK


def run_summarize(config: RunConfig) -> int:
    out = config.out or RESULTS_DIR / "summary.csv"
    summarize(config.reports, out, bench=config.bench)
    return EXIT_OK


DISPATCH = {
    "validate": run_validate,
    "features": run_features,
    "gram": run_gram,
    "cv": run_cv,
    "oracle-check": run_oracle_check,
    "bench": run_bench,
    "visit": run_visit,
    "summarize": run_summarize,
}


# ── entry ──────────────────────────────────────────────────────


def exit_code_for(exc: BaseException) -> int:
    """Exit code of an error category (order matters: several share ValueError)."""
    if isinstance(exc, (ConfigError, VisitError)):
        return EXIT_CONFIG
    if isinstance(exc, (GraphFormatError, FileNotFoundError)):
        return EXIT_DATASET
    if isinstance(exc, EncodingError):
        return EXIT_LABEL
    if isinstance(exc, (SpaceMismatchError, GramError, InternerMismatchError)):
        return EXIT_KERNEL
    if isinstance(exc, BudgetExceededError):
        return EXIT_ORACLE_BUDGET
    if isinstance(exc, (SvmError, ConvergenceError, FoldError)):
        return EXIT_SVM
    return EXIT_UNEXPECTED


def run(config: RunConfig) -> int:
    """Dispatch ``config.command``; errors are reported on stderr and mapped to exit codes."""
    try:
        return DISPATCH[config.command](config)
    except Exception as exc:
        code = exit_code_for(exc)
        kind = next((k for k, v in EXIT_CODES.items() if v == code), "unexpected")
        print(f"[{config.command}] ERROR ({kind}): {exc}", file=sys.stderr)
        return code


__all__ = ["COMMANDS", "ConfigError", "EXIT_CODES", "KERNEL_FAMILIES", "RunConfig", "exit_code_for", "run"]
