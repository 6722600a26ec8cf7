"""Shared random fixtures for the unit, property and acceptance tests."""

import numpy as np
from scipy.sparse.csgraph import shortest_path

from metriclab.covers import Cover, CoverElement
from metriclab.space import build_space_from_matrix, build_space_from_points


def line(*xs):
    return build_space_from_points([[float(x)] for x in xs], "euclidean")


def random_metric(rng: np.random.Generator, n: int):
    """Uniform [0,1] weights on the complete graph, closed under shortest paths.

    Raw uniform matrices break the triangle inequality, so the shortest-path
    closure is taken; it keeps many entries exactly uniform and stays a metric.
    """
    w = rng.uniform(0.0, 1.0, size=(n, n))
    w = np.triu(w, 1)
    w = w + w.T
    d = shortest_path(w, method="FW", directed=False)
    return build_space_from_matrix([str(i) for i in range(n)], d)


def random_cloud(rng: np.random.Generator, n: int, dim: int = 2):
    return build_space_from_points(rng.uniform(0.0, 1.0, size=(n, dim)), "euclidean")


def random_cover(rng: np.random.Generator, n: int, k: int) -> Cover:
    """k explicit members whose union is the whole space."""
    owner = rng.integers(0, k, size=n)
    extra = rng.random((k, n)) < 0.3
    elements = []
    for j in range(k):
        pts = np.flatnonzero((owner == j) | extra[j])
        elements.append(CoverElement.explicit(pts.tolist(), f"O{j}"))
    return Cover(tuple(elements))
