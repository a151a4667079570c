"""Seeded synthetic graph corpora.

Everything here takes an explicit ``numpy.random.Generator`` so that one
``--seed`` controls all randomness of a run.
"""
from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from context_kernel.datasets.graph import Dataset, Graph


DEFAULT_ALPHABET: tuple[str, ...] = ("A", "B", "C")

# Rough atom frequencies of small organic molecules.
ATOM_LABELS: tuple[str, ...] = ("C", "N", "O", "S", "Cl", "F", "P", "Br")
ATOM_WEIGHTS: tuple[float, ...] = (0.70, 0.12, 0.11, 0.02, 0.02, 0.01, 0.01, 0.01)
MAX_VALENCE = 4


def random_graph(
    rng: np.random.Generator,
    n_nodes: int,
    edge_prob: float = 0.3,
    alphabet: Sequence[str] = DEFAULT_ALPHABET,
) -> Graph:
    """Erdős–Rényi G(n, p) graph with uniformly drawn labels."""
    labels = [alphabet[i] for i in rng.integers(0, len(alphabet), size=n_nodes)]
    edges = [
        (i, j)
        for i in range(n_nodes)
        for j in range(i + 1, n_nodes)
        if rng.random() < edge_prob
    ]
    return Graph.from_edges(labels, edges)


def random_graphs(
    rng: np.random.Generator,
    count: int,
    *,
    min_nodes: int = 4,
    max_nodes: int = 10,
    edge_prob: float = 0.3,
    alphabet: Sequence[str] = DEFAULT_ALPHABET,
) -> list[Graph]:
    return [
        random_graph(rng, int(rng.integers(min_nodes, max_nodes + 1)), edge_prob, alphabet)
        for _ in range(count)
    ]


def molecule_like_graph(rng: np.random.Generator, max_nodes: int = 30, min_nodes: int = 6) -> Graph:
    """Sparse connected graph resembling a small molecule.

    A random tree with node degree capped at 4 plus a few ring closures.
    """
    n = int(rng.integers(min_nodes, max_nodes + 1))
    probs = np.asarray(ATOM_WEIGHTS) / sum(ATOM_WEIGHTS)
    labels = [ATOM_LABELS[i] for i in rng.choice(len(ATOM_LABELS), size=n, p=probs)]
    degree = [0] * n
    edges: set[tuple[int, int]] = set()

    for node in range(1, n):
        open_slots = [u for u in range(node) if degree[u] < MAX_VALENCE]
        parent = open_slots[int(rng.integers(0, len(open_slots)))]
        edges.add((parent, node))
        degree[parent] += 1
        degree[node] += 1

    rings = int(rng.integers(0, max(1, n // 6) + 1))
    for _ in range(rings):
        a, b = (int(x) for x in rng.choice(n, size=2, replace=False))
        key = (min(a, b), max(a, b))
        if key in edges or degree[a] >= MAX_VALENCE or degree[b] >= MAX_VALENCE:
            continue
        edges.add(key)
        degree[a] += 1
        degree[b] += 1

    return Graph.from_edges(labels, edges)


def molecule_like_dataset(rng: np.random.Generator, count: int, max_nodes: int = 30) -> Dataset:
    """Corpus for timing runs; class labels alternate and carry no signal."""
    graphs = tuple(molecule_like_graph(rng, max_nodes=max_nodes) for _ in range(count))
    labels = tuple(1 if i % 2 == 0 else -1 for i in range(count))
    return Dataset(name=f"synthetic_molecules_{count}", graphs=graphs, labels=labels)


def random_dataset(
    rng: np.random.Generator,
    count: int,
    *,
    min_nodes: int = 4,
    max_nodes: int = 10,
    edge_prob: float = 0.3,
    alphabet: Sequence[str] = DEFAULT_ALPHABET,
) -> Dataset:
    graphs = tuple(
        random_graphs(
            rng, count, min_nodes=min_nodes, max_nodes=max_nodes, edge_prob=edge_prob, alphabet=alphabet
        )
    )
    labels = tuple(int(y) for y in rng.choice([-1, 1], size=count))
    return Dataset(name=f"random_{count}", graphs=graphs, labels=labels)


def random_permutation(rng: np.random.Generator, graph: Graph) -> Graph:
    return graph.permuted([int(i) for i in rng.permutation(graph.n_nodes)])


def separable_dataset(rng: np.random.Generator, count: int = 40) -> Dataset:
    """Two classes over disjoint one-letter alphabets; every subtree kernel separates them."""
    half = count // 2
    positives = random_graphs(rng, half, min_nodes=3, max_nodes=7, edge_prob=0.4, alphabet=("A",))
    negatives = random_graphs(rng, count - half, min_nodes=3, max_nodes=7, edge_prob=0.4, alphabet=("X",))
    order = rng.permutation(count)
    graphs = positives + negatives
    labels = [1] * half + [-1] * (count - half)
    return Dataset(
        name=f"separable_{count}",
        graphs=tuple(graphs[i] for i in order),
        labels=tuple(labels[i] for i in order),
    )


def shuffled_labels(rng: np.random.Generator, dataset: Dataset) -> Dataset:
    """Same graphs, class labels randomly permuted (class balance preserved)."""
    labels = [dataset.labels[i] for i in rng.permutation(len(dataset))]
    return Dataset(name=f"{dataset.name}_shuffled", graphs=dataset.graphs, labels=tuple(labels))
