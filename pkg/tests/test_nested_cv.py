from __future__ import annotations

import json

import numpy as np
import pytest

from context_kernel.datasets.synthetic import separable_dataset, shuffled_labels
from context_kernel.evaluation.nested_cv import (
    CvGrid,
    CvReport,
    FoldError,
    check_disjoint,
    nested_cv,
    nested_cv_precomputed,
    split_seed,
)
from context_kernel.features.vector import KernelParams
from context_kernel.kernel.gram import GramMatrix


def _block_gram(labels: list[int]) -> GramMatrix:
    """Ones within a class, zeros across, plus the identity."""
    y = np.asarray(labels)
    return GramMatrix(values=(y[:, None] == y[None, :]).astype(float) + np.eye(len(y)))


SMALL_GRID = CvGrid(heights=[1, 2], lambdas=[1.0], cs=[1.0, 10.0])


def test_grid_settings_order():
    grid = CvGrid(heights=[1, 2], lambdas=[0.5, 1.0], cs=[1.0])
    assert [(p.h, p.lam) for p in grid.kernel_settings("tck")] == [(1, 0.5), (1, 1.0), (2, 0.5), (2, 1.0)]
    assert [(p.h, p.lam) for p in grid.kernel_settings("wl")] == [(1, 1.0), (2, 1.0)]


def test_grid_defaults_and_validation():
    grid = CvGrid()
    assert grid.heights == list(range(1, 11))
    assert grid.cs[0] == pytest.approx(1e-4) and grid.cs[-1] == pytest.approx(1e3)
    with pytest.raises(ValueError):
        CvGrid(heights=[0])
    with pytest.raises(ValueError):
        CvGrid(cs=[])


def test_grid_load(tmp_path):
    assert CvGrid.load("default") == CvGrid()
    path = tmp_path / "grid.json"
    path.write_text(json.dumps({"heights": [2], "cs": [0.1]}), encoding="utf-8")
    grid = CvGrid.load(path)
    assert grid.heights == [2]
    assert grid.cs == [0.1]
    assert grid.lambdas == CvGrid().lambdas


def test_split_seed_is_stable_and_distinct():
    assert split_seed(0, 1) == split_seed(0, 1)
    assert split_seed(0, 1) != split_seed(0, 2)
    assert split_seed(0, 1) != split_seed(0, 1, 0)


@pytest.mark.parametrize("seed", [0, 1, 7, 12345])
def test_outer_and_first_inner_seeds_differ(seed):
    for r in range(5):
        assert split_seed(seed, r) != split_seed(seed, r, 0)
        assert split_seed(seed, r, 0) != split_seed(seed, r, 0, 0)


def test_precomputed_block_kernel_is_perfect():
    labels = [1, -1] * 15
    rows, means = nested_cv_precomputed(
        [(KernelParams(h=1), _block_gram(labels))], labels, [1.0], outer_folds=5, inner_folds=3, repeats=2
    )
    assert len(rows) == 10
    assert means == [1.0, 1.0]
    assert all(row["accuracy"] == 1.0 for row in rows)


def test_precomputed_picks_first_best_in_grid_order():
    labels = [1, -1] * 10
    good = _block_gram(labels)
    rows, _ = nested_cv_precomputed(
        [(KernelParams(h=1), good), (KernelParams(h=2), good)], labels, [1.0, 10.0],
        outer_folds=4, inner_folds=2, repeats=1,
    )
    assert all(row["h"] == 1 and row["C"] == 1.0 for row in rows)


def test_inner_cv_never_sees_outer_test():
    labels = [1, -1] * 12
    seen = []

    def audit(outer_train, outer_test, inner_train, inner_val):
        seen.append(1)
        assert not set(outer_test) & (set(inner_train) | set(inner_val))
        assert set(inner_train) | set(inner_val) == set(outer_train)

    nested_cv_precomputed(
        [(KernelParams(h=1), _block_gram(labels))], labels, [1.0],
        outer_folds=4, inner_folds=3, repeats=2, audit=audit,
    )
    assert len(seen) == 2 * 4 * 3


def test_check_disjoint_detects_leak():
    with pytest.raises(RuntimeError):
        check_disjoint(np.array([0, 1, 2]), np.array([3]), np.array([0, 3]), np.array([1]))


def test_fold_error_on_tiny_class():
    labels = [1] * 10 + [-1] * 3
    with pytest.raises(FoldError):
        nested_cv_precomputed([(KernelParams(h=1), _block_gram(labels))], labels, [1.0], outer_folds=5, inner_folds=2)


def test_precomputed_accepts_a_generator_of_settings():
    labels = [1, -1] * 10
    rng = np.random.default_rng(4)
    noisy = rng.normal(size=(20, 3))
    settings = [
        (KernelParams(h=1), GramMatrix(noisy @ noisy.T)),
        (KernelParams(h=2), _block_gram(labels)),
        (KernelParams(h=3), _block_gram(labels)),
    ]
    produced = []

    def lazy():
        for params, g in settings:
            produced.append(params.h)
            yield params, g

    kwargs = dict(outer_folds=4, inner_folds=2, repeats=2, seed=3)
    eager = nested_cv_precomputed(settings, labels, [0.1, 1.0], **kwargs)
    streamed = nested_cv_precomputed(lazy(), labels, [0.1, 1.0], **kwargs)
    assert streamed == eager
    assert produced == [1, 2, 3]
    assert all(row["h"] in (1, 2) for row in eager[0])


def test_fold_error_raised_before_any_gram_is_built():
    labels = [1] * 10 + [-1] * 3
    produced = []

    def lazy():
        produced.append(1)
        yield KernelParams(h=1), _block_gram(labels)

    with pytest.raises(FoldError):
        nested_cv_precomputed(lazy(), labels, [1.0], outer_folds=5, inner_folds=2)
    assert produced == []


def test_empty_settings_rejected():
    with pytest.raises(ValueError, match="no kernel settings"):
        nested_cv_precomputed([], [1, -1] * 6, [1.0], outer_folds=3, inner_folds=2, repeats=1)


def test_separable_dataset_reaches_full_accuracy(rng):
    ds = separable_dataset(rng, 40)
    report = nested_cv(ds, "odd", SMALL_GRID, outer_folds=5, inner_folds=3, repeats=2, seed=0, normalized=True)
    assert report.mean == 1.0
    assert report.std == 0.0
    assert len(report.folds) == 10
    assert {row["h"] for row in report.folds} <= {1, 2}


def test_report_is_reproducible(rng):
    ds = separable_dataset(rng, 30)
    a = nested_cv(ds, "tck", SMALL_GRID, outer_folds=3, inner_folds=3, repeats=2, seed=11, normalized=True)
    b = nested_cv(ds, "tck", SMALL_GRID, outer_folds=3, inner_folds=3, repeats=2, seed=11, normalized=True, n_jobs=2)
    assert a.to_dict() == b.to_dict()


def test_shuffled_labels_near_chance():
    rng = np.random.default_rng(21)
    ds = shuffled_labels(rng, separable_dataset(rng, 60))
    report = nested_cv(ds, "wl", CvGrid(heights=[1], cs=[1.0]), outer_folds=5, inner_folds=3, repeats=3, seed=2)
    assert 0.2 <= report.mean <= 0.8


def test_report_round_trip_and_aggregates(tmp_path, rng):
    ds = separable_dataset(rng, 20)
    report = nested_cv(ds, "wl", CvGrid(heights=[1], cs=[1.0]), outer_folds=2, inner_folds=2, repeats=2)
    assert report.grid["lambdas"] == [1.0]
    path = tmp_path / "cv.json"
    report.save(path)
    loaded = CvReport.load(path)
    assert loaded == report
    means, mean, std = loaded.recompute()
    assert means == pytest.approx(report.repeat_means)
    assert mean == pytest.approx(report.mean)
    assert std == pytest.approx(report.std)
    assert path.read_text(encoding="utf-8").endswith("\n")
