# See LICENSE for details

import os

import numpy as np
import pytest

from core.graph import Graph

REPO_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), '..'))

E1_IMPORTANCE = [0, 3, 5]
E1_EDGES = [
    [0, 1, 4],
    [1, 0, 2],
    [4, 3, 0],
]


@pytest.fixture
def e1() -> Graph:
    """Three nodes, depot 0, asymmetric edges; greedy and nearest-neighbor disagree on it."""
    return Graph.build(E1_IMPORTANCE, E1_EDGES)


def integer_instance(n: int, seed: int, max_importance: int = 20, max_edge: int = 30) -> Graph:
    """Random asymmetric instance with integer weights, so every cost is an exact float."""
    rng = np.random.default_rng(seed)
    importance = [0] + [int(w) for w in rng.integers(1, max_importance, size=n - 1, endpoint=True)]
    edges = rng.integers(1, max_edge, size=(n, n), endpoint=True)
    np.fill_diagonal(edges, 0)
    return Graph.build(importance, edges.tolist())


@pytest.fixture
def micro_instance():
    return integer_instance


@pytest.fixture
def repo_root(monkeypatch):
    monkeypatch.chdir(REPO_ROOT)
    return REPO_ROOT
