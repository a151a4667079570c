"""Pairwise TCK evaluation over two implicit feature spaces."""
from __future__ import annotations

from context_kernel.implicit.decompose import ImplicitFeatureSpace


class InternerMismatchError(ValueError):
    """The two spaces were not built with the same interner and height."""


def kernel_implicit(a: ImplicitFeatureSpace, b: ImplicitFeatureSpace, lam: float) -> float:
    """TCK value of two graphs from their implicit feature spaces.

    Over shared features ``f`` (ascending id):

    - root term:    ``freq_root¹(f) · freq_root²(f) · λ^{size(f)}``
    - context term: for each shared context ``c`` of ``f`` (ascending id),
      ``freq_tot¹(c) · freq_tot²(c) · M¹(f,c) · M²(f,c) · λ^{size(f)}``

    Integer factors are multiplied exactly before the single float product,
    so ``kernel_implicit(a, b) == kernel_implicit(b, a)`` bit for bit.

    Raises:
        InternerMismatchError: Different interners or heights.
    """
    if a.interner_token != b.interner_token or a.h != b.h:
        raise InternerMismatchError(
            f"implicit spaces differ (interner {a.interner_token} vs {b.interner_token}, h {a.h} vs {b.h})"
        )
    total = 0.0
    for fid in sorted(a.records.keys() & b.records.keys()):
        ra, rb = a.records[fid], b.records[fid]
        count = ra.freq_root * rb.freq_root
        for cid in sorted(ra.contexts.keys() & rb.contexts.keys()):
            count += a.records[cid].freq_tot * b.records[cid].freq_tot * ra.contexts[cid] * rb.contexts[cid]
        if count:
            total += count * lam ** a.sizes[fid]
    return total
