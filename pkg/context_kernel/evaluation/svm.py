"""C-SVM on a precomputed kernel, solved by SMO.

Dual problem::

    min_α  ½ αᵀQα − eᵀα      Q_ij = y_i y_j K_ij
    s.t.   0 ≤ α_i ≤ C,  yᵀα = 0

Working pairs are chosen with second-order information (maximal violating
``i``, then the ``j`` with the largest guaranteed decrease). Selection is
deterministic: ties go to the lowest index.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


TAU = 1e-12
DEFAULT_TOL = 1e-3
DEFAULT_MAX_ITER = 10**6


class SvmError(ValueError):
    """Invalid training or prediction input."""


class ConvergenceError(RuntimeError):
    """SMO stopped at ``max_iter`` with the KKT gap still above tolerance."""

    def __init__(self, iterations: int, residual: float) -> None:
        super().__init__(f"SMO did not converge after {iterations} iterations (KKT gap {residual:.3e})")
        self.iterations = iterations
        self.residual = residual


@dataclass
class SvmModel:
    alphas: np.ndarray
    bias: float
    labels: np.ndarray
    C: float
    iterations: int = 0
    gap: float = 0.0

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.alphas > 0)

    @property
    def n_train(self) -> int:
        return len(self.alphas)

    def dual_coef(self) -> np.ndarray:
        return self.alphas * self.labels


def _check_training_input(kernel: np.ndarray, y: np.ndarray, C: float) -> None:
    n = len(y)
    if kernel.shape != (n, n):
        raise SvmError(f"kernel block shape {kernel.shape} does not match {n} labels")
    if not set(np.unique(y)) <= {-1.0, 1.0}:
        raise SvmError("labels must be -1 or +1")
    if len(np.unique(y)) < 2:
        raise SvmError("training set needs both classes")
    if not C > 0:
        raise SvmError(f"C must be > 0, got {C}")


def _bias(alphas: np.ndarray, y: np.ndarray, grad: np.ndarray, C: float) -> float:
    """Offset from the free support vectors, else the middle of the feasible interval."""
    yg = y * grad
    free = (alphas > 0) & (alphas < C)
    if free.any():
        return float(-yg[free].mean())
    at_upper = alphas >= C
    at_lower = alphas <= 0
    upper_side = (at_upper & (y < 0)) | (at_lower & (y > 0))
    lower_side = (at_upper & (y > 0)) | (at_lower & (y < 0))
    ub = yg[upper_side].min() if upper_side.any() else np.inf
    lb = yg[lower_side].max() if lower_side.any() else -np.inf
    return float(-(ub + lb) / 2)


def svm_train(
    kernel: np.ndarray,
    labels: np.ndarray,
    C: float,
    *,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SvmModel:
    """Train a C-SVM on a precomputed kernel block.

    Args:
        kernel: ``n × n`` kernel values between the training points.
        labels: ``n`` labels in {-1, +1}.
        C: Box constraint, ``C > 0``.
        tol: Stop once the maximal KKT violation gap is below ``tol``.
        max_iter: Iteration cap.

    Raises:
        SvmError: Bad shapes, labels or C, or a single class.
        ConvergenceError: ``max_iter`` reached; carries the residual gap.
    """
    K = np.asarray(kernel, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64)
    _check_training_input(K, y, C)

    n = len(y)
    alphas = np.zeros(n)
    grad = -np.ones(n)
    diag = np.diag(K).copy()
    pos = y > 0
    gap = np.inf

    for iteration in range(max_iter + 1):
        up = np.where(pos, alphas < C, alphas > 0)
        low = np.where(pos, alphas > 0, alphas < C)
        minus_yg = -y * grad

        score_up = np.where(up, minus_yg, -np.inf)
        i = int(np.argmax(score_up))
        g_max = score_up[i]
        g_max2 = np.max(np.where(low, -minus_yg, -np.inf))
        gap = g_max + g_max2
        if gap < tol:
            break
        if iteration == max_iter:
            raise ConvergenceError(iteration, float(gap))

        b = g_max - minus_yg
        a = diag[i] + diag - 2.0 * K[i]
        a = np.where(a > 0, a, TAU)
        gain = np.where(low & (b > 0), -(b * b) / a, np.inf)
        j = int(np.argmin(gain))

        step = b[j] / a[j]
        room_i = C - alphas[i] if y[i] > 0 else alphas[i]
        room_j = alphas[j] if y[j] > 0 else C - alphas[j]
        step = min(step, room_i, room_j)

        alphas[i] += y[i] * step
        alphas[j] -= y[j] * step
        if step == room_i:
            alphas[i] = C if y[i] > 0 else 0.0
        if step == room_j:
            alphas[j] = 0.0 if y[j] > 0 else C
        grad += step * y * (K[:, i] - K[:, j])

    return SvmModel(
        alphas=alphas,
        bias=_bias(alphas, y, grad, C),
        labels=y,
        C=float(C),
        iterations=iteration,
        gap=float(gap),
    )


def decision_function(model: SvmModel, kernel_rows: np.ndarray) -> np.ndarray:
    rows = np.asarray(kernel_rows, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[1] != model.n_train:
        raise SvmError(f"kernel rows of shape {rows.shape} do not match {model.n_train} training points")
    return rows @ model.dual_coef() + model.bias


def svm_predict(model: SvmModel, kernel_rows: np.ndarray) -> np.ndarray:
    """``sign(Σ α_i y_i K(x, x_i) + b)`` per row; an exact 0 predicts +1.

    Raises:
        SvmError: Column count differs from the training size.
    """
    rows = np.asarray(kernel_rows, dtype=np.float64)
    if rows.size == 0 and (rows.ndim != 2 or rows.shape[1] in (0, model.n_train)):
        return np.zeros(0, dtype=np.int64)
    return np.where(decision_function(model, rows) >= 0, 1, -1).astype(np.int64)
