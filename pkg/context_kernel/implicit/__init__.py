# context_kernel.implicit: hashmap feature spaces and pairwise TCK

from context_kernel.implicit.decompose import ImplicitFeatureSpace, ImplicitRecord, decompose_all, decompose_implicit
from context_kernel.implicit.kernel import InternerMismatchError, kernel_implicit

__all__ = [
    "ImplicitFeatureSpace",
    "ImplicitRecord",
    "InternerMismatchError",
    "decompose_all",
    "decompose_implicit",
    "kernel_implicit",
]
