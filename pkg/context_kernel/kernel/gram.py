"""Gram matrix assembly, normalization and export."""
from __future__ import annotations

import json
import time
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp
from joblib import Parallel, delayed

from context_kernel.datasets.graph import Graph
from context_kernel.features.batch import extract_all
from context_kernel.features.interner import FeatureInterner
from context_kernel.features.vector import KernelParams, SpaceTag, SparseFeatureVector
from context_kernel.implicit.decompose import ImplicitFeatureSpace, decompose_all
from context_kernel.implicit.kernel import kernel_implicit
from context_kernel.utils.jsonl import write_json
from context_kernel.utils.paths import sidecar_path


ENGINES = ("explicit", "implicit")
ROW_BLOCK = 256


class GramError(ValueError):
    """Gram matrix cannot be built or normalized.

    ``index`` is the offending row when one is known.
    """

    def __init__(self, message: str, index: int | None = None) -> None:
        super().__init__(message)
        self.index = index


@dataclass
class GramMatrix:
    values: np.ndarray
    kernel_tag: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2 or self.values.shape[0] != self.values.shape[1]:
            raise GramError(f"Gram matrix must be square, got shape {self.values.shape}")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    def submatrix(self, rows: Sequence[int] | np.ndarray, cols: Sequence[int] | np.ndarray) -> np.ndarray:
        return self.values[np.ix_(np.asarray(rows), np.asarray(cols))]

    def is_symmetric(self, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.values, self.values.T, rtol=0.0, atol=atol))

    def meta(self) -> dict:
        return {"n": self.n, "kernel_tag": self.kernel_tag, "timing": self.timing}

    def save(self, path: str | Path) -> Path:
        """Write ``path`` (CSV, 17 significant digits) plus ``.npy`` and ``.meta.json`` sidecars."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savetxt(path, self.values, fmt="%.17g", delimiter=",")
        np.save(sidecar_path(path, "npy"), self.values)
        write_json(sidecar_path(path, "meta.json"), self.meta())
        return path

    @classmethod
    def load(cls, path: str | Path) -> GramMatrix:
        path = Path(path)
        values = np.loadtxt(path, delimiter=",", ndmin=2)
        meta_path = sidecar_path(path, "meta.json")
        meta = json.loads(meta_path.read_text(encoding="utf-8")) if meta_path.exists() else {}
        return cls(values=values, kernel_tag=meta.get("kernel_tag", {}), timing=meta.get("timing", {}))


# ── filling ────────────────────────────────────────────────────


def feature_matrix(vectors: Sequence[SparseFeatureVector], n_features: int) -> sp.csr_matrix:
    """Stack vectors as CSR rows with sorted column indices."""
    indptr = [0]
    indices: list[np.ndarray] = []
    data: list[np.ndarray] = []
    for vector in vectors:
        ids, weights = vector.arrays()
        indices.append(ids)
        data.append(weights)
        indptr.append(indptr[-1] + len(ids))
    matrix = sp.csr_matrix(
        (
            np.concatenate(data) if data else np.zeros(0),
            np.concatenate(indices) if indices else np.zeros(0, dtype=np.int64),
            np.asarray(indptr),
        ),
        shape=(len(vectors), max(n_features, 1)),
    )
    matrix.sort_indices()
    return matrix


def _mirror_upper(values: np.ndarray) -> np.ndarray:
    upper = np.triu(values)
    return upper + np.triu(upper, 1).T


def _row_blocks(n: int) -> list[slice]:
    return [slice(start, min(start + ROW_BLOCK, n)) for start in range(0, n, ROW_BLOCK)]


def fill_explicit(vectors: Sequence[SparseFeatureVector], n_features: int, n_jobs: int = 1) -> np.ndarray:
    """``X X^T`` by row blocks; every entry is computed once and the upper triangle mirrored."""
    if len({v.space for v in vectors}) > 1:
        raise GramError("feature vectors from more than one kernel family")
    x = feature_matrix(vectors, n_features)
    xt = x.T.tocsr()

    def block(rows: slice) -> np.ndarray:
        return (x[rows] @ xt).toarray()

    blocks = Parallel(n_jobs=n_jobs, prefer="threads")(delayed(block)(s) for s in _row_blocks(x.shape[0]))
    return _mirror_upper(np.vstack(blocks))


def fill_implicit(spaces: Sequence[ImplicitFeatureSpace], lam: float, n_jobs: int = 1) -> np.ndarray:
    n = len(spaces)

    def row(i: int) -> list[float]:
        return [kernel_implicit(spaces[i], spaces[j], lam) for j in range(i, n)]

    rows = Parallel(n_jobs=n_jobs, prefer="threads")(delayed(row)(i) for i in range(n))
    values = np.zeros((n, n))
    for i, entries in enumerate(rows):
        values[i, i:] = entries
    return _mirror_upper(values)


def gram(
    graphs: Sequence[Graph],
    space: SpaceTag | str,
    params: KernelParams,
    *,
    engine: str = "explicit",
    n_jobs: int = 1,
    normalized: bool = False,
    verbose: bool = False,
) -> GramMatrix:
    """Kernel matrix of ``graphs`` for one kernel family and parameter setting.

    Features are extracted once, then the upper triangle is filled and
    mirrored. Extraction, fill and total wall-clock seconds are recorded.

    Args:
        graphs: Non-empty sequence of graphs (a ``Dataset.graphs``).
        space: Kernel family.
        params: Height and λ.
        engine: ``explicit`` (sparse feature vectors, any family) or
            ``implicit`` (hashmap spaces, TCK only).
        n_jobs: Workers for extraction and fill.
        normalized: Apply cosine normalization.
        verbose: Print timing.

    Raises:
        GramError: Empty input, unknown engine or unsupported family.
    """
    space = SpaceTag.parse(space)
    if not graphs:
        raise GramError("cannot build a Gram matrix over zero graphs")
    if engine not in ENGINES:
        raise GramError(f"unknown engine {engine!r} (expected one of {ENGINES})")
    if engine == "implicit" and space is not SpaceTag.TCK:
        raise GramError(f"the implicit engine computes TCK only, not {space.value}")

    interner = FeatureInterner()
    t0 = time.perf_counter()
    if engine == "explicit":
        vectors = extract_all(graphs, space, params, interner, n_jobs=n_jobs)
    else:
        spaces = decompose_all(graphs, params.h, interner, n_jobs=n_jobs)
    t1 = time.perf_counter()
    if engine == "explicit":
        values = fill_explicit(vectors, len(interner), n_jobs=n_jobs)
    else:
        values = fill_implicit(spaces, params.lam, n_jobs=n_jobs)
    t2 = time.perf_counter()

    result = GramMatrix(
        values=values,
        kernel_tag={
            "kernel": space.value,
            "h": params.h,
            "lambda": params.lam,
            "engine": engine,
            "normalized": False,
            "n_features": len(interner),
        },
        timing={"extract_seconds": t1 - t0, "fill_seconds": t2 - t1, "total_seconds": t2 - t0},
    )
    if verbose:
        print(
            f"[gram] {space.value} h={params.h} λ={params.lam} n={len(graphs)}: "
            f"extract {t1 - t0:.3f}s, fill {t2 - t1:.3f}s, {len(interner)} features"
        )
    return normalize(result) if normalized else result


def normalize(g: GramMatrix) -> GramMatrix:
    """Cosine normalization ``K_ij / sqrt(K_ii K_jj)``.

    Raises:
        GramError: A diagonal entry is not positive (``index`` names it).
    """
    diag = np.diag(g.values).copy()
    bad = np.flatnonzero(diag <= 0)
    if bad.size:
        raise GramError(f"diagonal entry {bad[0]} is {diag[bad[0]]!r}; cannot normalize", index=int(bad[0]))
    scale = np.sqrt(diag)
    values = g.values / np.outer(scale, scale)
    values = _mirror_upper(values)
    np.fill_diagonal(values, 1.0)
    return GramMatrix(values=values, kernel_tag={**g.kernel_tag, "normalized": True}, timing=dict(g.timing))


def check_gram(g: GramMatrix) -> list[str]:
    """Invariant violations of a Gram matrix (symmetry, diagonal sign)."""
    problems = []
    if not g.is_symmetric():
        problems.append("matrix is not symmetric to 1e-12")
    if (np.diag(g.values) < 0).any():
        problems.append("negative diagonal entry")
    if g.kernel_tag.get("normalized") and not np.allclose(np.diag(g.values), 1.0):
        problems.append("normalized matrix without unit diagonal")
    return problems
