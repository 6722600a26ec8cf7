"""Covers of finite metric spaces and their Lebesgue numbers.

A cover is a list of symbolic members (balls, explicit sets, complements)
plus truncated parametric ball families, evaluated against a space by
:func:`realize`. The central quantity is the supremal Lebesgue number

    exact = min{ diam(A) : A subset of target, A inside no single member }

("bad sets"). Because the Lebesgue condition quantifies over sets of
diameter strictly below alpha, ``exact`` itself is a valid Lebesgue number,
and every alpha > exact is refuted by a witness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

import numpy as np

from .boundedness import SeparationWitness
from .space import FiniteMetricSpace, point_set

INF = math.inf
DEFAULT_SEARCH_LIMIT = 10**6
RADIUS_FORMULAS = ("constant", "harmonic", "scaled")


class CoverError(ValueError):
    pass


class SearchLimitExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class CoverElement:
    kind: str  # "ball" | "explicit" | "complement"
    label: str
    center: int | None = None
    radius: float | None = None
    open: bool = True
    points: tuple[int, ...] = ()

    @classmethod
    def ball(cls, center: int, radius: float, label: str | None = None, open: bool = True) -> "CoverElement":
        if not radius > 0:
            raise CoverError(f"ball radius must be positive, got {radius}")
        tag = "B" if open else "B[]"
        return cls("ball", label or f"{tag}({center},{radius:g})", center=int(center), radius=float(radius), open=open)

    @classmethod
    def explicit(cls, points: Iterable[int], label: str | None = None) -> "CoverElement":
        pts = tuple(sorted({int(p) for p in points}))
        return cls("explicit", label or "{" + ",".join(map(str, pts)) + "}", points=pts)

    @classmethod
    def complement(cls, points: Iterable[int], label: str | None = None) -> "CoverElement":
        pts = tuple(sorted({int(p) for p in points}))
        return cls("complement", label or "X\\{" + ",".join(map(str, pts)) + "}", points=pts)


@dataclass(frozen=True)
class ParametricBallFamily:
    """Open balls B(center_of(n), radius(n)) for n = 1..N."""

    N: int
    centers: tuple[int, ...]
    radius_formula: str = "harmonic"
    c: float = 1.0
    label: str = "B"

    def __post_init__(self):
        if self.N < 1:
            raise CoverError("family truncation N must be >= 1")
        if len(self.centers) < self.N:
            raise CoverError(f"family {self.label!r} has {len(self.centers)} centers for N={self.N}")
        if self.radius_formula not in RADIUS_FORMULAS:
            raise CoverError(f"unknown radius formula {self.radius_formula!r}")

    def radius(self, n: int) -> float:
        if self.radius_formula == "constant":
            r = self.c
        elif self.radius_formula == "harmonic":
            # same float expression as the gap between sample points 1/n and 1/(n+1)
            r = 1.0 / n - 1.0 / (n + 1)
            if self.c != 1.0:
                r *= self.c
        else:
            r = self.c / n
        if not r > 0:
            raise CoverError(f"family {self.label!r}: nonpositive radius at n={n}")
        return r

    def expand(self) -> list[CoverElement]:
        return [CoverElement.ball(self.centers[n - 1], self.radius(n), f"{self.label}[{n}]")
                for n in range(1, self.N + 1)]


@dataclass(frozen=True)
class Cover:
    elements: tuple[CoverElement, ...] = ()
    families: tuple[ParametricBallFamily, ...] = ()
    target: tuple[int, ...] | None = None  # None: the whole space

    def members(self) -> list[CoverElement]:
        out = list(self.elements)
        for fam in self.families:
            out.extend(fam.expand())
        return out

    def with_target(self, target: Iterable[int] | None) -> "Cover":
        t = None if target is None else tuple(sorted({int(i) for i in target}))
        return Cover(self.elements, self.families, t)


@dataclass
class LebesgueReport:
    ball_bound: float
    exact: float | None  # None when the search limit was hit
    witness: tuple[int, ...] | None
    method: str  # brute | minimal-bad-set-search | bracket
    lower: float = 0.0
    upper: float = INF
    nodes: int = 0


@dataclass
class LocalFinitenessProfile:
    delta: float
    counts: dict[int, int] = field(default_factory=dict)

    @property
    def max_incidence(self) -> int:
        return max(self.counts.values(), default=0)


@dataclass
class SubcoverResult:
    labels: list[str]
    uncovered: int | None = None

    @property
    def ok(self) -> bool:
        return self.uncovered is None


def _element_mask(space: FiniteMetricSpace, el: CoverElement) -> np.ndarray:
    if el.kind == "ball":
        if not el.radius > 0:
            raise CoverError(f"ball radius must be positive, got {el.radius}")
        point_set(space, [el.center])
        row = space.dist[el.center]
        return row < el.radius if el.open else row <= el.radius
    mask = np.zeros(space.n, dtype=bool)
    mask[list(point_set(space, el.points))] = True
    if el.kind == "explicit":
        return mask
    if el.kind == "complement":
        return ~mask
    raise CoverError(f"unknown cover element kind {el.kind!r}")


def target_indices(space: FiniteMetricSpace, cover: Cover) -> np.ndarray:
    t = range(space.n) if cover.target is None else cover.target
    idx = point_set(space, t)
    if not idx:
        raise CoverError("cover target is empty")
    return np.asarray(idx, dtype=np.int64)


def membership(space: FiniteMetricSpace, cover: Cover) -> tuple[list[str], np.ndarray]:
    """Labels and a (members x points) boolean membership matrix."""
    members = cover.members()
    labels = [m.label for m in members]
    if not members:
        return labels, np.zeros((0, space.n), dtype=bool)
    return labels, np.vstack([_element_mask(space, m) for m in members])


def realize(space: FiniteMetricSpace, cover: Cover) -> list[tuple[str, tuple[int, ...]]]:
    target_indices(space, cover)
    labels, mem = membership(space, cover)
    return [(lab, tuple(int(j) for j in np.flatnonzero(row))) for lab, row in zip(labels, mem)]


def covers_check(space: FiniteMetricSpace, cover: Cover) -> int | None:
    """First target point lying in no member, or None if the cover covers its target."""
    tgt = target_indices(space, cover)
    _, mem = membership(space, cover)
    covered = mem[:, tgt].any(axis=0)
    miss = np.flatnonzero(~covered)
    return int(tgt[miss[0]]) if miss.size else None


def _require_cover(space: FiniteMetricSpace, cover: Cover) -> None:
    miss = covers_check(space, cover)
    if miss is not None:
        raise CoverError(f"not a cover: point {miss} ({space.labels[miss]}) is in no member")


def lebesgue_ball_bound(space: FiniteMetricSpace, cover: Cover) -> float:
    """min over target x of max over members O of d(x, X \\ O), with d(x, empty) = inf.

    Any set of diameter below this value containing x stays inside the
    member attaining the max for x, so it is a valid Lebesgue number.
    """
    _require_cover(space, cover)
    tgt = target_indices(space, cover)
    _, mem = membership(space, cover)
    best = np.zeros(space.n)
    in_target = np.zeros(space.n, dtype=bool)
    in_target[tgt] = True
    for row in mem:
        inside = np.flatnonzero(row & in_target)
        if not inside.size:
            continue
        outside = np.flatnonzero(~row)
        if outside.size:
            depth = space.dist[np.ix_(inside, outside)].min(axis=1)
        else:
            depth = np.full(inside.size, INF)
        best[inside] = np.maximum(best[inside], depth)
    return float(best[tgt].min())


class _BadSetSearch:
    """Branch and bound over transversals of the member complements.

    A set is bad iff it meets the complement (within the target) of every
    member. Each node picks the member still containing all chosen points
    whose complement has the fewest feasible points, and branches on those
    points in order of the diameter they would produce.
    """

    def __init__(self, dist: np.ndarray, mem: np.ndarray, limit: int):
        self.dist = dist
        self.mem = mem
        self.comp = ~mem
        self.limit = limit
        self.nodes = 0
        self.best = INF
        self.best_set: tuple[int, ...] | None = None
        self.first_only = False
        self.stop_at = -INF
        self.done = False

    def run(self, bound: float = INF, first_only: bool = False, stop_at: float = -INF) -> None:
        self.best = bound
        self.first_only = first_only
        self.stop_at = stop_at
        m = self.dist.shape[0]
        unhit = np.ones(self.mem.shape[0], dtype=bool)
        self._visit([], np.zeros(m), 0.0, unhit)

    def _visit(self, chosen: list[int], maxd: np.ndarray, diam: float, unhit: np.ndarray) -> None:
        self.nodes += 1
        if self.nodes > self.limit:
            raise SearchLimitExceeded(f"bad-set search exceeded {self.limit} nodes")
        if not unhit.any():
            if diam < self.best:
                self.best = diam
                self.best_set = tuple(sorted(chosen))
                if self.first_only or diam <= self.stop_at:
                    self.done = True
            return
        feasible = maxd < self.best
        rows = np.flatnonzero(unhit)
        counts = (self.comp[rows] & feasible).sum(axis=1)
        pick = int(np.argmin(counts))
        if counts[pick] == 0:
            return
        cand = np.flatnonzero(self.comp[rows[pick]] & feasible)
        cand = cand[np.argsort(maxd[cand], kind="stable")]
        for p in cand:
            step = max(diam, float(maxd[p]))
            if not step < self.best:
                break
            self._visit(chosen + [int(p)], np.maximum(maxd, self.dist[p]), step, unhit & self.mem[:, p])
            if self.done:
                return


def _local_problem(space: FiniteMetricSpace, cover: Cover):
    tgt = target_indices(space, cover)
    _, mem = membership(space, cover)
    return tgt, space.dist[np.ix_(tgt, tgt)], mem[:, tgt]


def _brute_force(dist: np.ndarray, mem: np.ndarray) -> tuple[float, tuple[int, ...] | None]:
    """Scan the whole power set of the target (bitmask DP on diameters)."""
    m = dist.shape[0]
    if m > 20:
        raise ValueError("power-set scan is limited to 20 target points")
    member_bits = [sum(1 << j for j in np.flatnonzero(row)) for row in mem]
    diam = [0.0] * (1 << m)
    best, best_set = INF, None
    for s in range(1, 1 << m):
        low = (s & -s).bit_length() - 1
        rest = s & (s - 1)
        d = diam[rest]
        r = rest
        while r:
            j = (r & -r).bit_length() - 1
            d = max(d, dist[low, j])
            r &= r - 1
        diam[s] = d
        if any(s & ~mb == 0 for mb in member_bits):
            continue
        members = tuple(j for j in range(m) if s >> j & 1)
        # ties: fewer points first, then lexicographic
        if d < best or (d == best and (len(members), members) < (len(best_set), best_set)):
            best, best_set = d, members
    return float(best), best_set


def lebesgue_exact(space: FiniteMetricSpace, cover: Cover, search_limit: int = DEFAULT_SEARCH_LIMIT,
                   method: str = "search") -> LebesgueReport:
    """Supremal Lebesgue number of ``cover`` with a minimum-diameter bad set as witness.

    ``method="brute"`` scans the power set of the target instead (oracle mode,
    at most 15 target points). When the search exceeds ``search_limit`` nodes
    the report carries a [lower, upper] bracket and ``exact=None``.
    """
    bound = lebesgue_ball_bound(space, cover)
    tgt, dist, mem = _local_problem(space, cover)
    if method == "brute":
        if tgt.size > 15:
            raise ValueError("brute-force Lebesgue computation is limited to 15 target points")
        exact, local = _brute_force(dist, mem)
        witness = None if local is None else tuple(int(tgt[j]) for j in local)
        return LebesgueReport(bound, exact, witness, "brute", exact, exact)
    if method != "search":
        raise ValueError(f"unknown method {method!r}")

    search = _BadSetSearch(dist, mem, search_limit)
    try:
        search.run(stop_at=bound)
    except SearchLimitExceeded:
        witness = None if search.best_set is None else tuple(int(tgt[j]) for j in search.best_set)
        return LebesgueReport(bound, None, witness, "bracket", bound, search.best, search.nodes)
    witness = None if search.best_set is None else tuple(int(tgt[j]) for j in search.best_set)
    return LebesgueReport(bound, float(search.best), witness, "minimal-bad-set-search",
                          float(search.best), float(search.best), search.nodes)


def lebesgue_witness(space: FiniteMetricSpace, cover: Cover, alpha: float,
                     search_limit: int = DEFAULT_SEARCH_LIMIT) -> tuple[int, ...] | None:
    """A target subset of diameter < alpha inside no single member, or None if alpha is a Lebesgue number."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    tgt, dist, mem = _local_problem(space, cover)
    search = _BadSetSearch(dist, mem, search_limit)
    search.run(bound=alpha, first_only=True)
    if search.best_set is None:
        return None
    return tuple(int(tgt[j]) for j in search.best_set)


def local_finiteness_profile(space: FiniteMetricSpace, cover: Cover, delta: float) -> LocalFinitenessProfile:
    """For each target point x, how many members meet the open ball B(x, delta)."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    tgt = target_indices(space, cover)
    _, mem = membership(space, cover)
    near = (space.dist[tgt] < delta).astype(np.float32)
    hits = (near @ mem.T.astype(np.float32)) > 0
    counts = hits.sum(axis=1)
    return LocalFinitenessProfile(float(delta), {int(t): int(c) for t, c in zip(tgt, counts)})


def finite_subcover(space: FiniteMetricSpace, cover: Cover, B: Iterable[int]) -> SubcoverResult:
    """Greedy subcover of B: largest residual intersection first, ties to the earlier member."""
    labels, mem = membership(space, cover)
    residual = np.zeros(space.n, dtype=bool)
    residual[list(point_set(space, B))] = True
    chosen: list[str] = []
    while residual.any():
        gain = (mem & residual).sum(axis=1) if len(labels) else np.zeros(0, dtype=int)
        if not gain.size or gain.max() == 0:
            return SubcoverResult(chosen, int(np.flatnonzero(residual)[0]))
        k = int(np.argmax(gain))
        chosen.append(labels[k])
        residual &= ~mem[k]
    return SubcoverResult(chosen)


def exact_min_subcover(space: FiniteMetricSpace, cover: Cover, B: Iterable[int]) -> list[str] | None:
    """Smallest subcover of B by exhaustive search (at most 20 members)."""
    labels, mem = membership(space, cover)
    if len(labels) > 20:
        raise ValueError("exhaustive subcover search is limited to 20 members")
    idx = list(point_set(space, B))
    if not idx:
        return []
    sub = mem[:, idx]
    for k in range(1, len(labels) + 1):
        for combo in combinations(range(len(labels)), k):
            if sub[list(combo)].any(axis=0).all():
                return [labels[i] for i in combo]
    return None


def finite_union_closure(space: FiniteMetricSpace, cover: Cover, max_members: int = 12) -> Cover:
    """Cover by all nonempty finite unions of the realized members."""
    realized = realize(space, cover)
    if len(realized) > max_members:
        raise ValueError(f"finite-union closure is limited to {max_members} members")
    elements = []
    for k in range(1, len(realized) + 1):
        for combo in combinations(realized, k):
            pts = set().union(*(set(p) for _, p in combo))
            elements.append(CoverElement.explicit(pts, "+".join(lab for lab, _ in combo)))
    return Cover(tuple(elements), (), cover.target)


def adversarial_cover(space: FiniteMetricSpace, witness: SeparationWitness, label: str = "B") -> Cover:
    """Balls of radius eps/(4n) around the n-th separated point, plus the complement of their centers.

    The target is the whole space.
    """
    if not witness.eps > 0:
        raise CoverError("separation witness needs eps > 0")
    if not witness.indices:
        raise CoverError("separation witness is empty")
    point_set(space, witness.indices)
    if not witness.is_valid(space):
        raise CoverError(f"points are not pairwise more than {witness.eps} apart")
    fam = ParametricBallFamily(len(witness.indices), tuple(witness.indices), "scaled", witness.eps / 4.0, label)
    rest = CoverElement.complement(witness.indices, "X\\S")
    return Cover((rest,), (fam,), None)
