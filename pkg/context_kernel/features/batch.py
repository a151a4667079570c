"""Feature extraction over a whole dataset, optionally in parallel.

Workers extract contiguous chunks of graphs with private interners and send
back their interned strings. The parent absorbs the chunks in dataset order,
so the shared interner ends up with exactly the ids a single-threaded run
assigns and the vectors do not depend on ``n_jobs``.
"""
from __future__ import annotations

from collections.abc import Callable, Sequence

from joblib import Parallel, delayed, effective_n_jobs

from context_kernel.datasets.graph import Graph
from context_kernel.features.encoding import remap_encoding, remap_wl
from context_kernel.features.explicit import odd_features, tck_features, tck_plus_odd_features
from context_kernel.features.interner import FeatureInterner
from context_kernel.features.vector import KernelParams, SpaceTag, SparseFeatureVector
from context_kernel.features.wl import wl_features


Extractor = Callable[[Graph, KernelParams, FeatureInterner], SparseFeatureVector]


def _wl(graph: Graph, params: KernelParams, interner: FeatureInterner) -> SparseFeatureVector:
    return wl_features(graph, params.h, interner)


EXTRACTORS: dict[SpaceTag, Extractor] = {
    SpaceTag.TCK: tck_features,
    SpaceTag.ODD: odd_features,
    SpaceTag.TCK_ODD: tck_plus_odd_features,
    SpaceTag.WL: _wl,
}

TRANSLATORS = {
    SpaceTag.TCK: remap_encoding,
    SpaceTag.ODD: remap_encoding,
    SpaceTag.TCK_ODD: remap_encoding,
    SpaceTag.WL: remap_wl,
}

CHUNKS_PER_JOB = 4


def _extract_chunk(
    graphs: Sequence[Graph], space: SpaceTag, params: KernelParams
) -> tuple[list[str], list[dict[int, float]]]:
    local = FeatureInterner()
    vectors = [EXTRACTORS[space](g, params, local).entries for g in graphs]
    return local.strings(), vectors


def chunk_ranges(n: int, n_chunks: int) -> list[range]:
    n_chunks = max(1, min(n, n_chunks))
    bounds = [round(i * n / n_chunks) for i in range(n_chunks + 1)]
    return [range(bounds[i], bounds[i + 1]) for i in range(n_chunks) if bounds[i] < bounds[i + 1]]


def extract_all(
    graphs: Sequence[Graph],
    space: SpaceTag | str,
    params: KernelParams,
    interner: FeatureInterner,
    n_jobs: int = 1,
) -> list[SparseFeatureVector]:
    """Feature vectors of ``graphs`` in order.

    Args:
        graphs: Graphs to embed.
        space: Kernel family.
        params: Height and λ (WL uses ``h`` only).
        interner: Shared interner; extended in place.
        n_jobs: Worker processes; 1 runs in-process.

    Returns:
        One vector per graph. Output is identical for every ``n_jobs``.
    """
    space = SpaceTag.parse(space)
    n_jobs = effective_n_jobs(n_jobs)
    if n_jobs == 1 or len(graphs) < 2:
        return [EXTRACTORS[space](g, params, interner) for g in graphs]

    chunks = chunk_ranges(len(graphs), n_jobs * CHUNKS_PER_JOB)
    results = Parallel(n_jobs=n_jobs)(
        delayed(_extract_chunk)([graphs[i] for i in chunk], space, params) for chunk in chunks
    )

    translate = TRANSLATORS[space]
    vectors: list[SparseFeatureVector] = []
    for strings, local_vectors in results:
        remap = interner.absorb(strings, translate)
        for entries in local_vectors:
            vectors.append(SparseFeatureVector(space, {remap[lid]: w for lid, w in entries.items()}))
    return vectors
