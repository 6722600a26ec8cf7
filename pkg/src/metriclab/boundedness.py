"""Total boundedness at a fixed scale: greedy eps-nets and eps-separated packings.

Nets cover with ``d <= eps``; packings separate with ``d > eps``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .space import FiniteMetricSpace, point_set


@dataclass(frozen=True)
class NetCertificate:
    eps: float
    centers: tuple[int, ...]  # in selection order
    assignment: dict[int, int]

    def is_valid(self, space: FiniteMetricSpace) -> bool:
        return all(space.dist[p, c] <= self.eps for p, c in self.assignment.items())


@dataclass(frozen=True)
class SeparationWitness:
    eps: float
    indices: tuple[int, ...]  # in selection order

    def is_valid(self, space: FiniteMetricSpace) -> bool:
        idx = np.asarray(self.indices, dtype=np.int64)
        if idx.size < 2:
            return True
        sub = space.dist[np.ix_(idx, idx)]
        off = ~np.eye(idx.size, dtype=bool)
        return bool(np.all(sub[off] > self.eps))


def _target(space: FiniteMetricSpace, target: Iterable[int] | None) -> np.ndarray:
    t = range(space.n) if target is None else target
    return np.asarray(point_set(space, t, allow_empty=False), dtype=np.int64)


def greedy_eps_net(space: FiniteMetricSpace, eps: float, target: Iterable[int] | None = None) -> NetCertificate:
    """Farthest-point greedy net of ``target`` at scale ``eps``.

    Starts from the lowest index and keeps adding the point farthest from the
    chosen centers (lowest index on ties) until everything is within eps.
    The centers are pairwise more than eps apart.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    tgt = _target(space, target)
    sub = space.dist[np.ix_(tgt, tgt)]
    chosen = [0]
    reach = sub[0].copy()
    owner = np.zeros(tgt.size, dtype=np.int64)
    while True:
        far = int(np.argmax(reach))
        if reach[far] <= eps:
            break
        chosen.append(far)
        closer = sub[far] < reach
        owner[closer] = len(chosen) - 1
        reach = np.where(closer, sub[far], reach)
    centers = tuple(int(tgt[c]) for c in chosen)
    # nearest center, ties to the earliest chosen one
    assignment = {int(tgt[i]): centers[owner[i]] for i in range(tgt.size)}
    return NetCertificate(float(eps), centers, assignment)


def max_separated_subset(space: FiniteMetricSpace, eps: float, target: Iterable[int] | None = None) -> SeparationWitness:
    """Maximal eps-separated subset of ``target``, built greedily in index order."""
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    tgt = _target(space, target)
    chosen: list[int] = []
    blocked = np.zeros(space.n, dtype=bool)
    for t in tgt:
        if not blocked[t]:
            chosen.append(int(t))
            blocked |= space.dist[t] <= eps
    return SeparationWitness(float(eps), tuple(chosen))


def covering_profile(space: FiniteMetricSpace, eps_list: Sequence[float],
                     target: Iterable[int] | None = None) -> dict[float, tuple[int, int]]:
    """eps -> (greedy net size, greedy packing size)."""
    tgt = None if target is None else list(target)
    out = {}
    for eps in eps_list:
        if not eps > 0:
            raise ValueError("eps must be positive")
        out[float(eps)] = (len(greedy_eps_net(space, eps, tgt).centers),
                           len(max_separated_subset(space, eps, tgt).indices))
    return out


def exact_min_net_size(space: FiniteMetricSpace, eps: float, target: Iterable[int] | None = None) -> int:
    """Smallest number of target points whose closed eps-balls cover the target.

    Exhaustive; meant as an oracle for at most 15 points.
    """
    tgt = _target(space, target)
    if tgt.size > 15:
        raise ValueError("exhaustive net search is limited to 15 points")
    near = space.dist[np.ix_(tgt, tgt)] <= eps
    for k in range(1, tgt.size + 1):
        for combo in combinations(range(tgt.size), k):
            if near[list(combo)].any(axis=0).all():
                return k
    raise AssertionError("unreachable: the full target is always a net")


def exact_max_packing_size(space: FiniteMetricSpace, eps: float, target: Iterable[int] | None = None) -> int:
    """Largest eps-separated subset of the target (exhaustive, at most 15 points)."""
    tgt = _target(space, target)
    if tgt.size > 15:
        raise ValueError("exhaustive packing search is limited to 15 points")
    sep = space.dist[np.ix_(tgt, tgt)] > eps
    for k in range(tgt.size, 0, -1):
        for combo in combinations(range(tgt.size), k):
            c = list(combo)
            block = sep[np.ix_(c, c)]
            if block.sum() == k * k - k:
                return k
    return 0
