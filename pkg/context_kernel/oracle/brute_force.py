"""Kernel values evaluated directly from their definitions on materialized trees.

Slow by construction; used to check the explicit feature maps.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from context_kernel.datasets.graph import Graph
from context_kernel.features.vector import KernelParams
from context_kernel.oracle.tree_visit import DEFAULT_BUDGET, TreeNode, visit_trees


def c_st(t1: TreeNode, t2: TreeNode, lam: float) -> float:
    """Recursive subtree match.

    ``λ`` for two equally labelled leaves, ``λ · Π C_ST(ch_l, ch_l)`` over
    aligned children when labels and out-degrees match, 0 otherwise.
    """
    if t1.label != t2.label:
        return 0.0
    if t1.is_leaf and t2.is_leaf:
        return lam
    if len(t1.children) != len(t2.children):
        return 0.0
    value = lam
    for a, b in zip(t1.children, t2.children):
        value *= c_st(a, b, lam)
        if value == 0.0:
            return 0.0
    return value


@dataclass
class SubtreeCensus:
    """All proper subtrees of all tree-visits of one graph, grouped by canonical form."""

    roots: Counter = field(default_factory=Counter)  # whole tree-visits T_j(v)
    nodes: Counter = field(default_factory=Counter)  # every proper subtree t(u)
    representatives: dict[str, TreeNode] = field(default_factory=dict)
    trees: list[TreeNode] = field(default_factory=list)


def subtree_census(graph: Graph, h: int, budget: int = DEFAULT_BUDGET) -> SubtreeCensus:
    census = SubtreeCensus()
    for _, _, tree in visit_trees(graph, h, budget):
        census.trees.append(tree)
        census.roots[tree.canonical] += 1
        census.representatives.setdefault(tree.canonical, tree)
        for node in tree.walk():
            census.nodes[node.canonical] += 1
            census.representatives.setdefault(node.canonical, node)
    return census


def brute_force_odd(g1: Graph, g2: Graph, params: KernelParams, budget: int = DEFAULT_BUDGET) -> float:
    """Shared proper subtrees of all tree-visits, each pair weighted ``λ^{size}``."""
    a = subtree_census(g1, params.h, budget)
    b = subtree_census(g2, params.h, budget)
    total = 0.0
    for key in sorted(a.nodes.keys() & b.nodes.keys()):
        total += a.nodes[key] * b.nodes[key] * params.lam ** a.representatives[key].size
    return total


def context_sum(x1: TreeNode, x2: TreeNode, lam: float, *, aligned_children: bool = False) -> float:
    """``Σ C_ST`` between the children of two matched subtrees.

    All child pairs by default, matching the explicit map; with
    ``aligned_children`` only the pairs at the same canonical position.
    """
    if aligned_children:
        return math.fsum(c_st(a, b, lam) for a, b in zip(x1.children, x2.children))
    return math.fsum(c_st(a, b, lam) for a in x1.children for b in x2.children)


def brute_force_tck(
    g1: Graph,
    g2: Graph,
    params: KernelParams,
    budget: int = DEFAULT_BUDGET,
    *,
    weighted_root: bool = True,
    aligned_children: bool = False,
    literal: bool = False,
) -> float:
    """Tree Context Kernel from its definition.

    Root term: whole tree-visits ``T_i(v1)``, ``T_j(v2)`` that are identical
    contribute ``λ^{size}`` (1 with ``weighted_root=False``). Context term:
    every pair of identical proper subtrees contributes the C_ST sum over
    their children.

    With ``literal=True`` every pair of tree nodes is compared with ``c_st``
    directly; otherwise pairs are grouped by canonical form, which gives the
    same value and is fast enough for the randomized suites.
    """
    lam = params.lam
    a = subtree_census(g1, params.h, budget)
    b = subtree_census(g2, params.h, budget)

    def root_weight(tree: TreeNode) -> float:
        return lam**tree.size if weighted_root else 1.0

    if literal:
        total = 0.0
        for t1 in a.trees:
            for t2 in b.trees:
                if c_st(t1, t2, lam) != 0.0:
                    total += root_weight(t1)
        nodes1 = [n for t in a.trees for n in t.walk() if not n.is_leaf]
        nodes2 = [n for t in b.trees for n in t.walk() if not n.is_leaf]
        for x1 in nodes1:
            for x2 in nodes2:
                if c_st(x1, x2, lam) != 0.0:
                    total += context_sum(x1, x2, lam, aligned_children=aligned_children)
        return total

    total = 0.0
    for key in sorted(a.roots.keys() & b.roots.keys()):
        total += a.roots[key] * b.roots[key] * root_weight(a.representatives[key])
    for key in sorted(a.nodes.keys() & b.nodes.keys()):
        x1, x2 = a.representatives[key], b.representatives[key]
        if x1.is_leaf:
            continue
        total += a.nodes[key] * b.nodes[key] * context_sum(x1, x2, lam, aligned_children=aligned_children)
    return total


def brute_force_tck_plus_odd(g1: Graph, g2: Graph, params: KernelParams, budget: int = DEFAULT_BUDGET) -> float:
    return brute_force_tck(g1, g2, params, budget) + brute_force_odd(g1, g2, params, budget)
