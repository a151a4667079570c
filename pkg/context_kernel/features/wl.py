"""Weisfeiler-Lehman subtree (fast subtree) baseline features."""
from __future__ import annotations

from collections import Counter

from context_kernel.datasets.graph import Graph
from context_kernel.features.encoding import CLOSE, OPEN, SEP, encode_leaf
from context_kernel.features.interner import FeatureInterner
from context_kernel.features.vector import SpaceTag, SparseFeatureVector


def refine(prev_id: int, neighbour_ids: list[int]) -> str:
    """Compressed-label string of one refinement step: ``prev⌈n1#n2...⌋``."""
    return f"{prev_id}{OPEN}{SEP.join(str(i) for i in sorted(neighbour_ids))}{CLOSE}"


def wl_iterations(graph: Graph, h: int, interner: FeatureInterner) -> list[Counter[int]]:
    """Per-iteration counts of compressed labels, iterations ``0..h``.

    Iteration 0 interns the node labels themselves. Compressed labels of
    different iterations never share an id.
    """
    if h < 0:
        raise ValueError(f"h must be >= 0, got {h}")
    current = [interner.intern(encode_leaf(label)) for label in graph.labels]
    counts = [Counter(current)]
    for _ in range(h):
        current = [
            interner.intern(refine(current[u], [current[w] for w in graph.neighbors(u)]))
            for u in range(graph.n_nodes)
        ]
        counts.append(Counter(current))
    return counts


def wl_features(graph: Graph, h: int, interner: FeatureInterner) -> SparseFeatureVector:
    vector = SparseFeatureVector(SpaceTag.WL)
    for counts in wl_iterations(graph, h, interner):
        for fid, count in sorted(counts.items()):
            vector.add(fid, float(count))
    return vector
