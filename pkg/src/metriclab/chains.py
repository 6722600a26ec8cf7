"""eps-chains, eps-components and finite chainability on finite metric spaces.

Edges of the threshold graph use ``d <= eps`` (chains allow steps of length
exactly eps).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .space import FiniteMetricSpace, point_set


@dataclass(frozen=True)
class ChainCertificate:
    eps: float
    points: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.points) - 1

    def is_valid(self, space: FiniteMetricSpace) -> bool:
        p = self.points
        return len(p) >= 1 and all(space.dist[a, b] <= self.eps for a, b in zip(p, p[1:]))

    def reversed(self) -> "ChainCertificate":
        return ChainCertificate(self.eps, self.points[::-1])


@dataclass
class ChainabilityProfile:
    threshold: float
    components_at: dict[float, list[tuple[int, ...]]] = field(default_factory=dict)


@dataclass
class FiniteChainabilityCertificate:
    """Chains of length <= m from every target point to one of the centers.

    ``unreachable`` lists the target points with no such chain; the
    certificate is complete iff it is empty.
    """

    eps: float
    m: int
    centers: tuple[int, ...]
    assignment: dict[int, tuple[int, ChainCertificate]]
    unreachable: tuple[int, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.unreachable


def _check_eps(eps: float) -> None:
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")


def threshold_graph(space: FiniteMetricSpace, eps: float) -> np.ndarray:
    return space.dist <= eps


def _bfs(adj: np.ndarray, sources: Iterable[int], depth: int | None = None):
    """Level-synchronous BFS.

    Returns (level, pred): level[v] = hop count or -1, pred[v] = the
    smallest-index node of the previous level adjacent to v (-1 for sources).
    """
    n = adj.shape[0]
    level = np.full(n, -1, dtype=np.int64)
    pred = np.full(n, -1, dtype=np.int64)
    frontier = np.array(sorted(set(sources)), dtype=np.int64)
    level[frontier] = 0
    k = 0
    while frontier.size and (depth is None or k < depth):
        reach = adj[frontier]
        new = np.flatnonzero(reach.any(axis=0) & (level < 0))
        if not new.size:
            break
        k += 1
        level[new] = k
        # frontier is ascending, so argmax picks the smallest-index predecessor
        pred[new] = frontier[np.argmax(reach[:, new], axis=0)]
        frontier = new
    return level, pred


def _walk(pred: np.ndarray, v: int) -> list[int]:
    path = [v]
    while pred[path[-1]] >= 0:
        path.append(int(pred[path[-1]]))
    return path


def eps_chain(space: FiniteMetricSpace, x: int, y: int, eps: float) -> ChainCertificate | None:
    """Shortest eps-chain from x to y, or None if they lie in different eps-components."""
    _check_eps(eps)
    point_set(space, (x, y))
    if x == y:
        return ChainCertificate(eps, (x,))
    # search from y so that walking predecessors yields the chain x -> y
    level, pred = _bfs(threshold_graph(space, eps), [y])
    if level[x] < 0:
        return None
    return ChainCertificate(eps, tuple(_walk(pred, x)))


def chain_length(space: FiniteMetricSpace, x: int, y: int, eps: float) -> int | None:
    c = eps_chain(space, x, y, eps)
    return None if c is None else c.length


def _canonical(labels: np.ndarray) -> list[tuple[int, ...]]:
    parts: dict[int, list[int]] = {}
    for i, c in enumerate(labels):
        parts.setdefault(int(c), []).append(i)
    return sorted((tuple(p) for p in parts.values()), key=lambda p: p[0])


def eps_components(space: FiniteMetricSpace, eps: float) -> list[tuple[int, ...]]:
    """Partition of the points into eps-components, ordered by smallest member."""
    _check_eps(eps)
    graph = csr_matrix(threshold_graph(space, eps))
    _, labels = connected_components(graph, directed=False)
    return _canonical(labels)


def chainability_threshold(space: FiniteMetricSpace) -> float:
    """Least eps making the space a single eps-component.

    This is the bottleneck edge of a minimum spanning tree (dense Prim).
    """
    n = space.n
    if n == 1:
        return 0.0
    d = space.dist
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    reach = d[0].copy()
    bottleneck = 0.0
    for _ in range(n - 1):
        cand = np.where(in_tree, np.inf, reach)
        j = int(np.argmin(cand))
        bottleneck = max(bottleneck, float(cand[j]))
        in_tree[j] = True
        np.minimum(reach, d[j], out=reach)
    return bottleneck


def chainability_profile(space: FiniteMetricSpace, eps_list: Iterable[float]) -> ChainabilityProfile:
    prof = ChainabilityProfile(chainability_threshold(space))
    for eps in eps_list:
        prof.components_at[float(eps)] = eps_components(space, eps)
    return prof


def finite_chainability_check(space: FiniteMetricSpace, target: Iterable[int], eps: float, m: int,
                              centers: Iterable[int], through: str = "whole-space") -> FiniteChainabilityCertificate:
    """Try to join every target point to some center by an eps-chain of length <= m.

    ``through="whole-space"`` lets chains pass through any point of the space
    (finitely chainable subset); ``"target-only"`` restricts them to the
    target itself (finitely chainable subspace), which also requires the
    centers to lie in the target. Shorter chains count because a chain can
    always be padded with zero-length steps.
    """
    _check_eps(eps)
    if m < 1:
        raise ValueError("chain length bound m must be >= 1")
    target = point_set(space, target)
    centers = point_set(space, centers, allow_empty=False)
    adj = threshold_graph(space, eps)
    if through == "target-only":
        if not set(centers) <= set(target):
            raise ValueError("target-only chains need centers inside the target")
        keep = np.zeros(space.n, dtype=bool)
        keep[list(target)] = True
        adj = adj & keep[:, None] & keep[None, :]
    elif through != "whole-space":
        raise ValueError(f"through must be 'whole-space' or 'target-only', got {through!r}")

    level, pred = _bfs(adj, centers, depth=m)
    assignment = {}
    unreachable = []
    for t in target:
        if level[t] < 0:
            unreachable.append(t)
            continue
        path = _walk(pred, t)
        assignment[t] = (path[-1], ChainCertificate(eps, tuple(path)))
    return FiniteChainabilityCertificate(eps, m, centers, assignment, tuple(unreachable))
