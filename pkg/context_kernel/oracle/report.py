"""Agreement report between the explicit maps, the oracle and the implicit engine."""
from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import asdict, dataclass, field

import numpy as np

from context_kernel.datasets.graph import Graph
from context_kernel.features.explicit import odd_features, tck_features, tck_plus_odd_features
from context_kernel.features.interner import FeatureInterner
from context_kernel.features.vector import KernelParams
from context_kernel.implicit.decompose import decompose_implicit
from context_kernel.implicit.kernel import kernel_implicit
from context_kernel.oracle.brute_force import brute_force_odd, brute_force_tck
from context_kernel.oracle.tree_visit import DEFAULT_BUDGET


DEFAULT_TOLERANCE = 1e-9

Pair = tuple[Graph, Graph]


def relative_error(value: float, reference: float) -> float:
    return abs(value - reference) / max(1.0, abs(reference))


@dataclass
class Comparison:
    """One measured quantity against its reference over all pairs."""

    name: str
    errors: list[float] = field(default_factory=list)
    tolerance: float = DEFAULT_TOLERANCE

    @property
    def max_error(self) -> float:
        return max(self.errors, default=0.0)

    @property
    def mean_error(self) -> float:
        return float(np.mean(self.errors)) if self.errors else 0.0

    @property
    def disagreements(self) -> int:
        return sum(e > self.tolerance for e in self.errors)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "pairs": len(self.errors),
            "max_relative_error": self.max_error,
            "mean_relative_error": self.mean_error,
            "disagreements": self.disagreements,
            "tolerance": self.tolerance,
        }


@dataclass
class DiscrepancyReport:
    params: KernelParams
    comparisons: dict[str, Comparison]

    def to_dict(self) -> dict:
        return {
            "params": asdict(self.params),
            "comparisons": [c.to_dict() for c in self.comparisons.values()],
        }

    def summary_lines(self) -> list[str]:
        lines = [f"h={self.params.h} λ={self.params.lam}"]
        for c in self.comparisons.values():
            lines.append(
                f"  {c.name:<32} max_rel_err={c.max_error:.3e}  mean={c.mean_error:.3e}  "
                f"disagree={c.disagreements}/{len(c.errors)}"
            )
        return lines


def _explicit_dot(extractor: Callable, g1: Graph, g2: Graph, params: KernelParams) -> float:
    interner = FeatureInterner()
    return extractor(g1, params, interner).dot(extractor(g2, params, interner))


def _implicit(g1: Graph, g2: Graph, params: KernelParams) -> float:
    interner = FeatureInterner()
    return kernel_implicit(
        decompose_implicit(g1, params.h, interner), decompose_implicit(g2, params.h, interner), params.lam
    )


COMPARISONS = (
    "odd: explicit vs oracle",
    "tck: explicit vs oracle",
    "tck+odd: explicit vs oracle",
    "tck: implicit vs explicit",
    "tck: unweighted-root oracle vs explicit",
    "tck: aligned-children oracle vs explicit",
)


def discrepancy_report(
    pairs: Sequence[Pair],
    params: KernelParams,
    budget: int = DEFAULT_BUDGET,
    tolerance: float = DEFAULT_TOLERANCE,
) -> DiscrepancyReport:
    """Measure every implementation path against its reference on ``pairs``.

    The first three comparisons are expected to agree to ``tolerance``. The
    implicit engine and the two alternative oracle readings are measured
    only; their disagreement count is informative.

    Raises:
        BudgetExceededError: A tree-visit exceeds ``budget`` nodes.
    """
    comparisons = {name: Comparison(name, tolerance=tolerance) for name in COMPARISONS}

    def record(name: str, value: float, reference: float) -> None:
        comparisons[name].errors.append(relative_error(value, reference))

    for g1, g2 in pairs:
        odd_ref = brute_force_odd(g1, g2, params, budget)
        tck_ref = brute_force_tck(g1, g2, params, budget)
        odd = _explicit_dot(odd_features, g1, g2, params)
        tck = _explicit_dot(tck_features, g1, g2, params)
        both = _explicit_dot(tck_plus_odd_features, g1, g2, params)

        record(COMPARISONS[0], odd, odd_ref)
        record(COMPARISONS[1], tck, tck_ref)
        record(COMPARISONS[2], both, tck_ref + odd_ref)
        record(COMPARISONS[3], _implicit(g1, g2, params), tck)
        record(COMPARISONS[4], brute_force_tck(g1, g2, params, budget, weighted_root=False), tck)
        record(COMPARISONS[5], brute_force_tck(g1, g2, params, budget, aligned_children=True), tck)

    return DiscrepancyReport(params=params, comparisons=comparisons)
