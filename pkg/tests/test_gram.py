from __future__ import annotations

import json

import numpy as np
import pytest

from context_kernel.datasets.graph import Graph
from context_kernel.datasets.synthetic import random_graphs
from context_kernel.features.vector import KernelParams
from context_kernel.kernel.gram import GramError, GramMatrix, check_gram, gram, normalize
from context_kernel.kernel.spectral import is_psd, min_eigen_ratio


def test_two_node_gram(ab):
    g = gram([ab], "tck", KernelParams(h=1, lam=1.0))
    assert g.values.shape == (1, 1)
    assert g.values[0, 0] == pytest.approx(6.0)
    assert g.kernel_tag["kernel"] == "tck"
    assert g.kernel_tag["normalized"] is False
    assert set(g.timing) == {"extract_seconds", "fill_seconds", "total_seconds"}


@pytest.mark.parametrize("space", ["tck", "odd", "tck+odd", "wl"])
def test_symmetric_and_psd(small_graphs, space):
    g = gram(small_graphs, space, KernelParams(h=3, lam=0.8))
    assert g.is_symmetric()
    assert np.array_equal(g.values, g.values.T)
    assert min_eigen_ratio(g) >= -1e-8
    assert check_gram(g) == []


def test_normalized_has_unit_diagonal(small_graphs):
    g = gram(small_graphs, "tck", KernelParams(h=2, lam=1.0), normalized=True)
    assert np.all(np.diag(g.values) == 1.0)
    assert g.kernel_tag["normalized"] is True
    assert np.all(np.abs(g.values) <= 1.0 + 1e-12)
    assert is_psd(g)


def test_normalize_small_matrix():
    g = normalize(GramMatrix(values=[[4.0, 2.0], [2.0, 1.0]]))
    assert np.allclose(g.values, np.ones((2, 2)))


def test_normalize_rejects_zero_diagonal():
    with pytest.raises(GramError) as info:
        normalize(GramMatrix(values=[[1.0, 0.0], [0.0, 0.0]]))
    assert info.value.index == 1


def test_implicit_engine_matches_explicit(small_graphs):
    params = KernelParams(h=3, lam=0.6)
    explicit = gram(small_graphs, "tck", params)
    implicit = gram(small_graphs, "tck", params, engine="implicit", n_jobs=2)
    assert np.allclose(explicit.values, implicit.values, rtol=1e-9, atol=1e-12)
    assert implicit.is_symmetric()


def test_implicit_engine_is_tck_only(small_graphs):
    with pytest.raises(GramError):
        gram(small_graphs, "odd", KernelParams(h=1), engine="implicit")


def test_empty_and_unknown_engine(ab):
    with pytest.raises(GramError):
        gram([], "tck", KernelParams(h=1))
    with pytest.raises(GramError):
        gram([ab], "tck", KernelParams(h=1), engine="dense")


def test_threads_do_not_change_values():
    graphs = random_graphs(np.random.default_rng(9), 30, min_nodes=3, max_nodes=8)
    params = KernelParams(h=2, lam=0.9)
    one = gram(graphs, "tck+odd", params, n_jobs=1)
    many = gram(graphs, "tck+odd", params, n_jobs=3)
    assert np.array_equal(one.values, many.values)


def test_disjoint_graphs_have_zero_entry():
    a = Graph.from_edges(["A", "A"], [(0, 1)])
    x = Graph.from_edges(["X"], [])
    g = gram([a, x], "odd", KernelParams(h=2))
    assert g.values[0, 1] == 0.0
    assert g.values[1, 1] > 0


def test_save_and_load(tmp_path, small_graphs):
    g = gram(small_graphs[:5], "odd", KernelParams(h=2, lam=0.7))
    path = g.save(tmp_path / "K.csv")
    loaded = GramMatrix.load(path)
    assert np.array_equal(loaded.values, g.values)
    assert np.array_equal(np.load(tmp_path / "K.csv.npy"), g.values)
    meta = json.loads((tmp_path / "K.csv.meta.json").read_text(encoding="utf-8"))
    assert meta["n"] == 5
    assert meta["kernel_tag"]["h"] == 2


def test_submatrix(small_graphs):
    g = gram(small_graphs[:4], "wl", KernelParams(h=2))
    block = g.submatrix([0, 2], [1, 3])
    assert block.shape == (2, 2)
    assert block[1, 0] == g.values[2, 1]


def test_gram_rejects_non_square():
    with pytest.raises(GramError):
        GramMatrix(values=np.zeros((2, 3)))


def test_check_gram_flags_asymmetry():
    problems = check_gram(GramMatrix(values=[[1.0, 0.5], [0.0, 1.0]]))
    assert any("symmetric" in p for p in problems)


# ── spectral ───────────────────────────────────────────────────


def test_min_eigen_ratio_zero_matrix():
    assert min_eigen_ratio(np.zeros((3, 3))) == 0.0


def test_min_eigen_ratio_indefinite():
    ratio = min_eigen_ratio(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert ratio == pytest.approx(-1.0)
    assert not is_psd(np.array([[0.0, 1.0], [1.0, 0.0]]))


def test_min_eigen_ratio_identity():
    assert min_eigen_ratio(np.eye(4)) == pytest.approx(1.0)


@pytest.mark.parametrize("space", ["tck", "odd", "wl"])
def test_cauchy_schwarz(small_graphs, space):
    values = gram(small_graphs, space, KernelParams(h=3, lam=0.8)).values
    diag = np.diag(values)
    assert np.all(values**2 <= np.outer(diag, diag) * (1 + 1e-9) + 1e-12)


def test_reordering_graphs_permutes_gram(small_graphs, rng):
    params = KernelParams(h=3, lam=0.7)
    perm = rng.permutation(len(small_graphs))
    base = gram(small_graphs, "tck+odd", params).values
    moved = gram([small_graphs[i] for i in perm], "tck+odd", params).values
    np.testing.assert_allclose(moved, base[np.ix_(perm, perm)], rtol=1e-12)


def test_normalize_keeps_random_psd_matrix_psd(rng):
    for _ in range(10):
        factors = rng.normal(size=(12, 5))
        values = factors @ factors.T + 1e-3 * np.eye(12)
        assert is_psd(values)
        assert is_psd(normalize(GramMatrix(values)))
