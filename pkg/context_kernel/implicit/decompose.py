"""Implicit feature spaces: per-feature frequencies and context sets.

Instead of materializing (feature, context) pairs, each feature keeps

- ``freq_root``: how often it is the root feature of a visit,
- ``freq_tot``: its ``n_sp``-weighted number of occurrences,
- ``contexts``: context feature -> ``M(f, c)``, the number of children of
  the context's root that carry feature ``f``.

The visit loop is the one of :mod:`context_kernel.features.explicit`,
including the sorted-children keys.
"""
from __future__ import annotations

from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field

from joblib import Parallel, delayed, effective_n_jobs

from context_kernel.datasets.graph import Graph
from context_kernel.features.batch import CHUNKS_PER_JOB, chunk_ranges
from context_kernel.features.encoding import encode_composite, encode_leaf, remap_encoding
from context_kernel.features.interner import FeatureInterner
from context_kernel.visits.dag import dag_visit


@dataclass
class ImplicitRecord:
    freq_root: int = 0
    freq_tot: int = 0
    contexts: dict[int, int] = field(default_factory=dict)


@dataclass
class ImplicitFeatureSpace:
    """Hashmap representation of one graph for a fixed visit height."""

    h: int
    interner_token: int
    records: dict[int, ImplicitRecord] = field(default_factory=dict)
    sizes: dict[int, int] = field(default_factory=dict)

    def record(self, feature_id: int, size: int) -> ImplicitRecord:
        found = self.records.get(feature_id)
        if found is None:
            found = self.records[feature_id] = ImplicitRecord()
            self.sizes[feature_id] = size
        return found

    def validate(self) -> list[str]:
        problems = []
        for fid, rec in self.records.items():
            if rec.freq_root > rec.freq_tot:
                problems.append(f"feature {fid}: freq_root {rec.freq_root} > freq_tot {rec.freq_tot}")
            for cid, m in rec.contexts.items():
                if cid not in self.records:
                    problems.append(f"feature {fid}: context {cid} has no record")
                if m < 1:
                    problems.append(f"feature {fid}: M({fid},{cid}) = {m}")
        return problems


def decompose_implicit(graph: Graph, h: int, interner: FeatureInterner) -> ImplicitFeatureSpace:
    """Build the implicit feature space of ``graph`` for visit height ``h``."""
    space = ImplicitFeatureSpace(h=h, interner_token=interner.token)
    leaf_ids = [interner.intern(encode_leaf(label)) for label in graph.labels]

    for v in range(graph.n_nodes):
        visit = dag_visit(graph, v, h)
        diam = visit.diam
        feats: dict[int, list[int]] = {}
        sizes: dict[int, list[int]] = {}

        for u in visit.order:
            kids = visit.successors[u]
            fu = [leaf_ids[u]]
            su = [1]
            for d in range(1, diam - visit.depth[u] + 1):
                if not kids:
                    fu.append(leaf_ids[u])
                    su.append(1)
                    continue
                child_feats = [feats[ch][d - 1] for ch in kids]
                fid = interner.intern(encode_composite(graph.labels[u], child_feats))
                size = 1 + sum(sizes[ch][d - 1] for ch in kids)
                fu.append(fid)
                su.append(size)
                space.record(fid, size)
                for cf, m in Counter(child_feats).items():
                    child = space.records[cf]
                    child.contexts[fid] = m

            feats[u] = fu
            sizes[u] = su
            for fid, size in zip(fu, su):
                rec = space.record(fid, size)
                rec.freq_tot += visit.n_sp[u]
                if u == v:
                    rec.freq_root += 1

    return space


def _decompose_chunk(graphs: Sequence[Graph], h: int) -> tuple[list[str], list[ImplicitFeatureSpace]]:
    local = FeatureInterner()
    spaces = [decompose_implicit(g, h, local) for g in graphs]
    return local.strings(), spaces


def _translated(space: ImplicitFeatureSpace, remap: list[int], token: int) -> ImplicitFeatureSpace:
    records = {
        remap[fid]: ImplicitRecord(
            freq_root=rec.freq_root,
            freq_tot=rec.freq_tot,
            contexts={remap[cid]: m for cid, m in rec.contexts.items()},
        )
        for fid, rec in space.records.items()
    }
    sizes = {remap[fid]: size for fid, size in space.sizes.items()}
    return ImplicitFeatureSpace(h=space.h, interner_token=token, records=records, sizes=sizes)


def decompose_all(
    graphs: Sequence[Graph], h: int, interner: FeatureInterner, n_jobs: int = 1
) -> list[ImplicitFeatureSpace]:
    """Implicit spaces of ``graphs`` in order.

    Workers decompose chunks with private interners; the parent absorbs them
    in dataset order, so feature ids (and the id-ordered kernel sums) match a
    single-process run for every ``n_jobs``.
    """
    n_jobs = effective_n_jobs(n_jobs)
    if n_jobs == 1 or len(graphs) < 2:
        return [decompose_implicit(g, h, interner) for g in graphs]

    chunks = chunk_ranges(len(graphs), n_jobs * CHUNKS_PER_JOB)
    results = Parallel(n_jobs=n_jobs)(delayed(_decompose_chunk)([graphs[i] for i in chunk], h) for chunk in chunks)

    spaces: list[ImplicitFeatureSpace] = []
    for strings, local_spaces in results:
        remap = interner.absorb(strings, remap_encoding)
        spaces.extend(_translated(s, remap, interner.token) for s in local_spaces)
    return spaces
