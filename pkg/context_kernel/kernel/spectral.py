"""Spectral sanity checks for kernel matrices."""
from __future__ import annotations

import numpy as np
from scipy.linalg import eigh
from scipy.sparse.linalg import eigsh

from context_kernel.kernel.gram import GramMatrix


DENSE_LIMIT = 2000


def extreme_eigenvalues(values: np.ndarray) -> tuple[float, float]:
    """Smallest and largest eigenvalue of a symmetric matrix.

    Dense ``eigh`` up to ``DENSE_LIMIT`` rows, Lanczos (``eigsh``) above.
    """
    n = values.shape[0]
    if n <= DENSE_LIMIT:
        eigvals = eigh(values, eigvals_only=True)
        return float(eigvals[0]), float(eigvals[-1])
    low = eigsh(values, k=1, which="SA", return_eigenvectors=False)
    high = eigsh(values, k=1, which="LA", return_eigenvectors=False)
    return float(low[0]), float(high[0])


def min_eigen_ratio(g: GramMatrix | np.ndarray) -> float:
    """``λ_min / λ_max`` of a symmetric matrix; 0.0 for the zero matrix.

    A kernel matrix is PSD to tolerance ``tol`` when the ratio is ``>= -tol``.
    """
    values = g.values if isinstance(g, GramMatrix) else np.asarray(g, dtype=np.float64)
    low, high = extreme_eigenvalues(values)
    scale = max(abs(low), abs(high))
    if scale == 0.0:
        return 0.0
    return low / scale


def is_psd(g: GramMatrix | np.ndarray, tol: float = 1e-8) -> bool:
    return min_eigen_ratio(g) >= -tol
