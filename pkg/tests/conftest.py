from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from context_kernel.datasets.graph import Graph
from context_kernel.datasets.synthetic import random_graphs


FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def tu_dir() -> Path:
    return FIXTURES / "TINY"


@pytest.fixture
def jsonl_path() -> Path:
    return FIXTURES / "tiny.jsonl"


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def small_graphs(rng) -> list[Graph]:
    """Twenty random labelled graphs with 4..8 nodes."""
    return random_graphs(rng, 20, min_nodes=4, max_nodes=8)


@pytest.fixture
def ab() -> Graph:
    return Graph.from_edges(["A", "B"], [(0, 1)])


@pytest.fixture
def aba() -> Graph:
    return Graph.from_edges(["A", "B", "A"], [(0, 1), (1, 2)])


@pytest.fixture
def square() -> Graph:
    """4-cycle 0-1-2-3-0: two shortest paths from 0 to 2."""
    return Graph.from_edges(["A", "B", "C", "B"], [(0, 1), (1, 2), (2, 3), (3, 0)])


@pytest.fixture
def triangle() -> Graph:
    return Graph.from_edges(["A", "A", "A"], [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def star() -> Graph:
    """Centre A with three B leaves."""
    return Graph.from_edges(["A", "B", "B", "B"], [(0, 1), (0, 2), (0, 3)])
