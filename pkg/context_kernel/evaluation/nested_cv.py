"""Repeated nested cross-validation with grid search over kernel params and C.

Protocol per repeat: stratified outer folds; on each outer training set an
inner stratified CV scores every (kernel params, C) grid point; the best
point (first in grid order on ties) is retrained on the whole outer
training set and scored on the outer test fold. Gram matrices are computed
once per kernel setting, sliced per fold and released once every fold
has scored it.
"""
from __future__ import annotations

import json
from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from joblib import Parallel, delayed
from sklearn.metrics import accuracy_score
from sklearn.model_selection import ParameterGrid, StratifiedKFold

from context_kernel.datasets.graph import Dataset
from context_kernel.features.vector import KernelParams, SpaceTag
from context_kernel.evaluation.svm import svm_predict, svm_train
from context_kernel.kernel.gram import GramMatrix, gram
from context_kernel.utils.jsonl import write_json


# ── configuration ──────────────────────────────────────────────


DEFAULT_HEIGHTS = list(range(1, 11))
DEFAULT_LAMBDAS = [0.1, 0.5, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.8]
DEFAULT_CS = [10.0**k for k in range(-4, 4)]


class FoldError(ValueError):
    """A class has fewer members than the requested number of folds."""


@dataclass
class CvGrid:
    """Hyperparameter grid; WL ignores ``lambdas``."""

    heights: list[int] = field(default_factory=lambda: list(DEFAULT_HEIGHTS))
    lambdas: list[float] = field(default_factory=lambda: list(DEFAULT_LAMBDAS))
    cs: list[float] = field(default_factory=lambda: list(DEFAULT_CS))

    def __post_init__(self) -> None:
        if not self.heights or not self.lambdas or not self.cs:
            raise ValueError("grid axes must be non-empty")
        if any(h < 1 for h in self.heights):
            raise ValueError("heights must be >= 1")
        if any(lam <= 0 for lam in self.lambdas) or any(c <= 0 for c in self.cs):
            raise ValueError("lambdas and C values must be > 0")

    def kernel_settings(self, space: SpaceTag | str) -> list[KernelParams]:
        """Kernel grid in search order: height outermost, then λ."""
        lambdas = [1.0] if SpaceTag.parse(space) is SpaceTag.WL else self.lambdas
        return [KernelParams(h=p["h"], lam=p["lam"]) for p in ParameterGrid({"h": self.heights, "lam": lambdas})]

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> CvGrid:
        return cls(
            heights=[int(h) for h in d.get("heights", DEFAULT_HEIGHTS)],
            lambdas=[float(x) for x in d.get("lambdas", DEFAULT_LAMBDAS)],
            cs=[float(c) for c in d.get("cs", DEFAULT_CS)],
        )

    @classmethod
    def load(cls, spec: str | Path) -> CvGrid:
        """``"default"`` or the path of a JSON file with any of the three axes."""
        if str(spec) == "default":
            return cls()
        return cls.from_dict(json.loads(Path(spec).read_text(encoding="utf-8")))


@dataclass
class CvReport:
    """Accuracies of every outer fold plus their aggregates. Fractions in [0, 1]."""

    dataset: str
    kernel: str
    grid: dict
    repeats: int
    outer_folds: int
    inner_folds: int
    seed: int
    normalized: bool
    folds: list[dict] = field(default_factory=list)
    repeat_means: list[float] = field(default_factory=list)
    mean: float = 0.0
    std: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> CvReport:
        return cls(**d)

    def save(self, path: str | Path) -> None:
        write_json(path, self.to_dict())

    @classmethod
    def load(cls, path: str | Path) -> CvReport:
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def recompute(self) -> tuple[list[float], float, float]:
        """Aggregates rebuilt from the raw fold table."""
        by_repeat: dict[int, list[float]] = {}
        for row in self.folds:
            by_repeat.setdefault(row["repeat"], []).append(row["accuracy"])
        means = [float(np.mean(by_repeat[r])) for r in sorted(by_repeat)]
        return means, float(np.mean(means)), float(np.std(means))


# ── protocol ───────────────────────────────────────────────────


AuditHook = Callable[[np.ndarray, np.ndarray, np.ndarray, np.ndarray], None]


def split_seed(seed: int, *path: int) -> int:
    """Independent 32-bit seed for one (repeat[, fold]) position.

    The path length is part of the entropy: SeedSequence pads trailing zeros,
    so ``(r,)`` and ``(r, 0)`` would otherwise collide.
    """
    return int(np.random.SeedSequence([seed, len(path), *path]).generate_state(1)[0])


def check_stratifiable(labels: np.ndarray, n_splits: int, what: str) -> None:
    _, counts = np.unique(labels, return_counts=True)
    if len(counts) < 2:
        raise FoldError(f"{what}: only one class present")
    if counts.min() < n_splits:
        raise FoldError(f"{what}: smallest class has {counts.min()} members, {n_splits} folds requested")


def check_disjoint(outer_train: np.ndarray, outer_test: np.ndarray, inner_train: np.ndarray, inner_val: np.ndarray) -> None:
    """Inner indices must come from the outer training set only."""
    test = set(outer_test.tolist())
    if test & set(inner_train.tolist()) or test & set(inner_val.tolist()):
        raise RuntimeError("inner CV touched outer test indices")
    if set(inner_train.tolist()) & set(inner_val.tolist()):
        raise RuntimeError("inner train and validation folds overlap")
    if not set(inner_train.tolist()) | set(inner_val.tolist()) <= set(outer_train.tolist()):
        raise RuntimeError("inner CV used indices outside the outer training set")


def fit_score(values: np.ndarray, y: np.ndarray, train: np.ndarray, test: np.ndarray, C: float) -> float:
    model = svm_train(values[np.ix_(train, train)], y[train], C)
    predicted = svm_predict(model, values[np.ix_(test, train)])
    return float(accuracy_score(y[test], predicted))


def _inner_score(
    values: np.ndarray, y: np.ndarray, splits: Sequence[tuple[np.ndarray, np.ndarray]], C: float
) -> float:
    return float(np.mean([fit_score(values, y, tr, va, C) for tr, va in splits]))


@dataclass
class FoldPlan:
    """Index sets of one outer fold plus its running best grid point."""

    repeat: int
    fold: int
    train: np.ndarray
    test: np.ndarray
    splits: list[tuple[np.ndarray, np.ndarray]]
    best_score: float = -np.inf
    params: KernelParams | None = None
    C: float = 0.0
    accuracy: float = 0.0


def plan_folds(
    y: np.ndarray,
    *,
    outer_folds: int,
    inner_folds: int,
    repeats: int,
    seed: int,
    audit: AuditHook | None = None,
) -> list[FoldPlan]:
    """Outer and inner splits of every repeat, checked for leakage."""
    check_stratifiable(y, outer_folds, "outer folds")
    plans = []
    for r in range(repeats):
        outer = StratifiedKFold(n_splits=outer_folds, shuffle=True, random_state=split_seed(seed, r))
        for f, (train, test) in enumerate(outer.split(np.zeros(len(y)), y)):
            check_stratifiable(y[train], inner_folds, f"repeat {r} fold {f} inner folds")
            inner = StratifiedKFold(n_splits=inner_folds, shuffle=True, random_state=split_seed(seed, r, f))
            splits = [(train[a], train[b]) for a, b in inner.split(np.zeros(len(train)), y[train])]
            for inner_train, inner_val in splits:
                check_disjoint(train, test, inner_train, inner_val)
                if audit is not None:
                    audit(train, test, inner_train, inner_val)
            plans.append(FoldPlan(repeat=r, fold=f, train=train, test=test, splits=splits))
    return plans


def nested_cv_precomputed(
    grams: Iterable[tuple[KernelParams, GramMatrix]],
    labels: Sequence[int],
    cs: Sequence[float],
    *,
    outer_folds: int = 10,
    inner_folds: int = 10,
    repeats: int = 10,
    seed: int = 0,
    n_jobs: int = 1,
    audit: AuditHook | None = None,
    verbose: bool = False,
) -> tuple[list[dict], list[float]]:
    """Run the protocol on Gram matrices taken one kernel setting at a time.

    ``grams`` may be a generator. Each setting is scored on every fold and
    then released, so only the current matrix is held. A fold's best point
    changes on strict improvement only, which keeps the first best in grid
    order.

    Returns:
        The fold table and the per-repeat mean accuracies.

    Raises:
        FoldError: A class is too small to stratify outer or inner folds.
        ValueError: ``grams`` is empty.
    """
    y = np.asarray(labels)
    plans = plan_folds(y, outer_folds=outer_folds, inner_folds=inner_folds, repeats=repeats, seed=seed, audit=audit)

    for params, g in grams:
        values = g.values
        scores = Parallel(n_jobs=n_jobs, prefer="threads")(
            delayed(_inner_score)(values, y, plan.splits, C) for plan in plans for C in cs
        )
        for i, plan in enumerate(plans):
            fold_scores = scores[i * len(cs) : (i + 1) * len(cs)]
            best = int(np.argmax(fold_scores))
            if fold_scores[best] > plan.best_score:
                plan.best_score, plan.params, plan.C = float(fold_scores[best]), params, cs[best]
                plan.accuracy = fit_score(values, y, plan.train, plan.test, cs[best])

    rows: list[dict] = []
    by_repeat: dict[int, list[float]] = {}
    for plan in plans:
        if plan.params is None:
            raise ValueError("no kernel settings to evaluate")
        by_repeat.setdefault(plan.repeat, []).append(plan.accuracy)
        rows.append(
            {
                "repeat": plan.repeat,
                "fold": plan.fold,
                "accuracy": plan.accuracy,
                "inner_accuracy": plan.best_score,
                "h": plan.params.h,
                "lam": plan.params.lam,
                "C": plan.C,
                "n_train": int(len(plan.train)),
                "n_test": int(len(plan.test)),
            }
        )
        if verbose:
            print(
                f"[cv] repeat {plan.repeat} fold {plan.fold}: acc={plan.accuracy:.4f} "
                f"(h={plan.params.h} λ={plan.params.lam} C={plan.C:g})"
            )
    repeat_means = [float(np.mean(by_repeat[r])) for r in sorted(by_repeat)]
    return rows, repeat_means


def nested_cv(
    dataset: Dataset,
    space: SpaceTag | str,
    grid: CvGrid | None = None,
    *,
    outer_folds: int = 10,
    inner_folds: int = 10,
    repeats: int = 10,
    seed: int = 0,
    normalized: bool = False,
    engine: str = "explicit",
    n_jobs: int = 1,
    audit: AuditHook | None = None,
    verbose: bool = False,
) -> CvReport:
    """Repeated nested CV of one kernel family on ``dataset``.

    Args:
        dataset: Labelled graphs.
        space: Kernel family.
        grid: Heights, λ values and C values; defaults to the full grid.
        outer_folds: Outer stratified folds.
        inner_folds: Inner stratified folds used for model selection.
        repeats: Independent repetitions with different splits.
        seed: Master seed; the report is identical for identical seeds.
        normalized: Cosine-normalize every Gram matrix.
        engine: Gram engine (``explicit`` or ``implicit``).
        n_jobs: Workers for Gram construction and grid scoring.
        audit: Called with (outer_train, outer_test, inner_train, inner_val)
            for every inner split.
        verbose: Print per-fold progress.

    Raises:
        FoldError: Fold too small to stratify.
    """
    space = SpaceTag.parse(space)
    grid = grid or CvGrid()
    check_stratifiable(np.asarray(dataset.labels), outer_folds, "outer folds")

    def settings() -> Iterator[tuple[KernelParams, GramMatrix]]:
        for params in grid.kernel_settings(space):
            g = gram(dataset.graphs, space, params, engine=engine, n_jobs=n_jobs, normalized=normalized)
            if verbose:
                print(f"[cv] gram {space.value} h={params.h} λ={params.lam} ready")
            yield params, g

    rows, repeat_means = nested_cv_precomputed(
        settings(),
        dataset.labels,
        grid.cs,
        outer_folds=outer_folds,
        inner_folds=inner_folds,
        repeats=repeats,
        seed=seed,
        n_jobs=n_jobs,
        audit=audit,
        verbose=verbose,
    )
    grid_record = grid.to_dict()
    if space is SpaceTag.WL:
        grid_record["lambdas"] = [1.0]
    return CvReport(
        dataset=dataset.name,
        kernel=space.value,
        grid=grid_record,
        repeats=repeats,
        outer_folds=outer_folds,
        inner_folds=inner_folds,
        seed=seed,
        normalized=normalized,
        folds=rows,
        repeat_means=repeat_means,
        mean=float(np.mean(repeat_means)),
        std=float(np.std(repeat_means)),
    )
