# context_kernel.kernel: Gram matrices and spectral checks

from context_kernel.kernel.gram import GramError, GramMatrix, gram, normalize
from context_kernel.kernel.spectral import is_psd, min_eigen_ratio

__all__ = ["GramError", "GramMatrix", "gram", "is_psd", "min_eigen_ratio", "normalize"]
