"""Explicit feature maps for the TCK and ODD subtree kernels.

For every root ``v`` the DAG visit ``DAG_h(v)`` is walked in reverse
topological order. Node ``u`` at height ``d`` gets the feature

    f_{u,0} = κ(L(u))
    f_{u,d} = κ(L(u) ⌈ sort(f_{ch,d-1}) ⌋)      d > 0, u has DAG children
    f_{u,d} = f_{u,0}                           d > 0, u has none

with ``size_{u,d}`` the node count of the subtree it encodes. ODD weights
every occurrence by ``n_sp(v,u) · λ^{size/2}``; TCK moves that weight onto
(feature, parent context) pairs, and onto (feature, ∅) at the root.
"""
from __future__ import annotations

from context_kernel.datasets.graph import Graph
from context_kernel.features.encoding import encode_composite, encode_contexted, encode_leaf
from context_kernel.features.interner import FeatureInterner
from context_kernel.features.vector import KernelParams, SpaceTag, SparseFeatureVector
from context_kernel.visits.dag import dag_visit


class _HalfPowers(dict):
    """size -> λ^{size/2}, filled on demand."""

    def __init__(self, lam: float) -> None:
        super().__init__()
        self.lam = lam

    def __missing__(self, size: int) -> float:
        value = self.lam ** (size / 2)
        self[size] = value
        return value


def subtree_features(
    graph: Graph,
    params: KernelParams,
    interner: FeatureInterner,
    *,
    tck: SparseFeatureVector | None = None,
    odd: SparseFeatureVector | None = None,
) -> None:
    """Run the shared visit loop, accumulating into whichever vectors are given.

    Passing the same vector as ``tck`` and ``odd`` yields the TCK+ODD map:
    plain and contexted ids never collide.
    """
    weight = _HalfPowers(params.lam)
    leaf_ids = [interner.intern(encode_leaf(label)) for label in graph.labels]

    for v in range(graph.n_nodes):
        visit = dag_visit(graph, v, params.h)
        diam = visit.diam
        # feats[u][d], sizes[u][d] for d in 0..diam - depth(u)
        feats: dict[int, list[int]] = {}
        sizes: dict[int, list[int]] = {}

        for u in visit.order:
            kids = visit.successors[u]
            label = graph.labels[u]
            n_sp = visit.n_sp[u]
            fu = [leaf_ids[u]]
            su = [1]

            for d in range(1, diam - visit.depth[u] + 1):
                if not kids:
                    fu.append(leaf_ids[u])
                    su.append(1)
                    continue
                child_feats = [feats[ch][d - 1] for ch in kids]
                fid = interner.intern(encode_composite(label, child_feats))
                fu.append(fid)
                su.append(1 + sum(sizes[ch][d - 1] for ch in kids))
                if tck is not None:
                    for ch, cf in zip(kids, child_feats):
                        tck.add(interner.intern(encode_contexted(cf, fid)), n_sp * weight[sizes[ch][d - 1]])

            feats[u] = fu
            sizes[u] = su
            for fid, size in zip(fu, su):
                if tck is not None and u == v:
                    tck.add(interner.intern(encode_contexted(fid, None)), weight[size])
                if odd is not None:
                    odd.add(fid, n_sp * weight[size])


def tck_features(graph: Graph, params: KernelParams, interner: FeatureInterner) -> SparseFeatureVector:
    """Tree Context Kernel feature map: (subtree, context) pairs."""
    vector = SparseFeatureVector(SpaceTag.TCK)
    subtree_features(graph, params, interner, tck=vector)
    return vector


def odd_features(graph: Graph, params: KernelParams, interner: FeatureInterner) -> SparseFeatureVector:
    """ODD subtree feature map, same loop ranges as :func:`tck_features`."""
    vector = SparseFeatureVector(SpaceTag.ODD)
    subtree_features(graph, params, interner, odd=vector)
    return vector


def tck_plus_odd_features(graph: Graph, params: KernelParams, interner: FeatureInterner) -> SparseFeatureVector:
    vector = SparseFeatureVector(SpaceTag.TCK_ODD)
    subtree_features(graph, params, interner, tck=vector, odd=vector)
    return vector
