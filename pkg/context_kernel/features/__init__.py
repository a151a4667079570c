# context_kernel.features package

from context_kernel.features.batch import extract_all
from context_kernel.features.encoding import EncodingError, encode_composite, encode_contexted, encode_leaf
from context_kernel.features.explicit import odd_features, tck_features, tck_plus_odd_features
from context_kernel.features.interner import FeatureInterner
from context_kernel.features.vector import (
    KernelParams,
    SpaceMismatchError,
    SpaceTag,
    SparseFeatureVector,
    dot,
    feature_stats,
)
from context_kernel.features.wl import wl_features

__all__ = [
    "EncodingError",
    "FeatureInterner",
    "KernelParams",
    "SpaceMismatchError",
    "SpaceTag",
    "SparseFeatureVector",
    "dot",
    "encode_composite",
    "encode_contexted",
    "encode_leaf",
    "extract_all",
    "feature_stats",
    "odd_features",
    "tck_features",
    "tck_plus_odd_features",
    "wl_features",
]
