import numpy as np
import pytest

from lapreg.graph import Graph, generate_geometric_graph, laplacian
from lapreg.synth import make_instance


def path_graph(m, w=1.0):
    W = np.zeros((m, m))
    for i in range(m - 1):
        W[i, i + 1] = W[i + 1, i] = w
    return Graph.from_weights(W)


def complete_graph(m, w=1.0):
    W = w * (np.ones((m, m)) - np.eye(m))
    return Graph.from_weights(W)


def two_components():
    W = np.zeros((4, 4))
    W[0, 1] = W[1, 0] = 1.0
    W[2, 3] = W[3, 2] = 2.0
    return Graph.from_weights(W)


@pytest.fixture
def small_problem():
    """Connected 6-vertex graph and an instance with k=2, n=40."""
    s = laplacian(generate_geometric_graph(6, 0.5, 0.0, seed=11))
    inst = make_instance(s, 2, 40, 1.0, seed=5)
    return s, inst


@pytest.fixture(scope="session")
def reference_problem():
    """m=100, k=10, n=500, sigma^2=5 on a complete RBF graph."""
    s = laplacian(generate_geometric_graph(100, 0.5, 0.0, seed=2024))
    inst = make_instance(s, 10, 500, np.sqrt(5.0), seed=2024)
    return s, inst
