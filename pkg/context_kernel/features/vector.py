"""Sparse explicit feature vectors and kernel parameters."""
from __future__ import annotations

from collections import defaultdict
from collections.abc import Sequence
from dataclasses import asdict, dataclass, field
from enum import Enum

import numpy as np

from context_kernel.features.encoding import CLOSE, CONTEXT_SEP, EMPTY_CONTEXT, OPEN, SEP, is_contexted
from context_kernel.features.interner import FeatureInterner


class SpaceTag(str, Enum):
    """Kernel family a feature vector belongs to."""

    TCK = "tck"
    ODD = "odd"
    TCK_ODD = "tck+odd"
    WL = "wl"

    @classmethod
    def parse(cls, value: str | SpaceTag) -> SpaceTag:
        try:
            return cls(str(value.value if isinstance(value, SpaceTag) else value).lower())
        except ValueError:
            choices = ", ".join(t.value for t in cls)
            raise ValueError(f"Unknown kernel family {value!r} (expected one of: {choices})") from None


KERNEL_FAMILIES: tuple[str, ...] = tuple(t.value for t in SpaceTag)


class SpaceMismatchError(ValueError):
    """Two vectors from different kernel families were combined."""


@dataclass(frozen=True)
class KernelParams:
    """Visit height ``h`` and subtree weight ``lam``."""

    h: int = 3
    lam: float = 1.0

    def __post_init__(self) -> None:
        if isinstance(self.h, bool) or not isinstance(self.h, int) or self.h < 1:
            raise ValueError(f"h must be an integer >= 1, got {self.h!r}")
        if not self.lam > 0:
            raise ValueError(f"lambda must be > 0, got {self.lam!r}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> KernelParams:
        return cls(h=int(d["h"]), lam=float(d.get("lam", 1.0)))


@dataclass
class SparseFeatureVector:
    """Explicit image of one graph: interned feature id -> weight (> 0)."""

    space: SpaceTag
    entries: dict[int, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.space = SpaceTag.parse(self.space)

    def add(self, feature_id: int, weight: float) -> None:
        self.entries[feature_id] = self.entries.get(feature_id, 0.0) + weight

    def __len__(self) -> int:
        return len(self.entries)

    def get(self, feature_id: int) -> float:
        return self.entries.get(feature_id, 0.0)

    def items(self) -> list[tuple[int, float]]:
        """Entries in ascending id order."""
        return sorted(self.entries.items())

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        items = self.items()
        ids = np.fromiter((i for i, _ in items), dtype=np.int64, count=len(items))
        weights = np.fromiter((w for _, w in items), dtype=np.float64, count=len(items))
        return ids, weights

    def dot(self, other: SparseFeatureVector) -> float:
        """Sum of weight products over shared ids, accumulated in ascending id order.

        Raises:
            SpaceMismatchError: The vectors belong to different kernel families.
        """
        if self.space is not other.space:
            raise SpaceMismatchError(f"cannot combine {self.space.value} and {other.space.value} vectors")
        small, large = (self, other) if len(self) <= len(other) else (other, self)
        total = 0.0
        for fid in sorted(k for k in small.entries if k in large.entries):
            total += small.entries[fid] * large.entries[fid]
        return total


def dot(a: SparseFeatureVector, b: SparseFeatureVector) -> float:
    return a.dot(b)


# ── statistics ────────────────────────────────────────────────


@dataclass(frozen=True)
class FeatureStats:
    nnz: int
    base_features: int  # distinct plain features (for TCK: features carrying a context)
    max_contexts: int   # most contexts (∅ included) observed for one base feature

    def to_dict(self) -> dict:
        return asdict(self)


def feature_stats(vector: SparseFeatureVector, interner: FeatureInterner) -> FeatureStats:
    """Count entries, base features and the widest context set of a vector."""
    contexts: dict[str, set[str]] = defaultdict(set)
    plain: set[int] = set()
    for fid in vector.entries:
        encoding = interner.lookup(fid)
        if is_contexted(encoding):
            feature, _, context = encoding.partition(CONTEXT_SEP)
            contexts[feature].add(context)
        else:
            plain.add(fid)
    if vector.space in (SpaceTag.TCK, SpaceTag.TCK_ODD):
        base = len(contexts)
    else:
        base = len(plain)
    widest = max((len(c) for c in contexts.values()), default=0)
    return FeatureStats(nnz=len(vector), base_features=base, max_contexts=widest)


# ── serialization ─────────────────────────────────────────────


def vector_record(index: int, vector: SparseFeatureVector, interner: FeatureInterner) -> dict:
    features = sorted((interner.lookup(fid), weight) for fid, weight in vector.entries.items())
    return {
        "graph": index,
        "space": vector.space.value,
        "features": [[encoding, weight] for encoding, weight in features],
    }


def vectors_to_records(vectors: Sequence[SparseFeatureVector], interner: FeatureInterner) -> list[dict]:
    """One JSON-ready record per graph, features sorted by encoding string."""
    return [vector_record(i, v, interner) for i, v in enumerate(vectors)]


def encoded_items(vector: SparseFeatureVector, interner: FeatureInterner) -> list[tuple[str, float]]:
    """(encoding, weight) pairs sorted by encoding, ids resolved to nested strings.

    Interned ids depend on extraction order; the nested strings depend only
    on graph structure, so they are what permutation checks compare.
    """
    cache: dict[int, str] = {}
    wl = vector.space is SpaceTag.WL
    return sorted((expand_encoding(interner, fid, wl=wl, cache=cache), w) for fid, w in vector.entries.items())


def expand_encoding(
    interner: FeatureInterner, feature_id: int, *, wl: bool = False, cache: dict[int, str] | None = None
) -> str:
    """Resolve an interned id into a fully nested, id-free string.

    With ``wl=True`` the head of a refinement is itself an id (the node's
    previous compressed label) and is expanded too.
    """
    cache = {} if cache is None else cache
    if feature_id in cache:
        return cache[feature_id]
    encoding = interner.lookup(feature_id)
    if is_contexted(encoding):
        feature, _, context = encoding.partition(CONTEXT_SEP)
        if context != EMPTY_CONTEXT:
            context = expand_encoding(interner, int(context), wl=wl, cache=cache)
        result = f"{expand_encoding(interner, int(feature), wl=wl, cache=cache)}{CONTEXT_SEP}{context}"
    else:
        head, open_, rest = encoding.partition(OPEN)
        if not open_:
            result = encoding
        else:
            if wl:
                head = expand_encoding(interner, int(head), wl=wl, cache=cache)
            body = rest[: -len(CLOSE)]
            kids = sorted(expand_encoding(interner, int(p), wl=wl, cache=cache) for p in body.split(SEP)) if body else []
            result = f"{head}{OPEN}{SEP.join(kids)}{CLOSE}"
    cache[feature_id] = result
    return result
