"""Finite metric spaces and the distance primitives everything else builds on."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

METRICS = ("euclidean", "l1", "chebyshev")

# exhaustive triangle scan up to this many points, sampled triples above
_EXHAUSTIVE_TRIANGLE_LIMIT = 512
_SAMPLED_TRIPLES = 200_000


@dataclass(frozen=True)
class MetricViolation:
    kind: str  # asymmetry | negative | nonzero-self | triangle
    witness: tuple[int, ...]
    magnitude: float


class MetricError(ValueError):
    """Raised when a matrix fails the metric axioms beyond tolerance."""

    def __init__(self, violations: list[MetricViolation]):
        self.violations = violations
        head = ", ".join(f"{v.kind}{v.witness}={v.magnitude:g}" for v in violations[:5])
        more = f" (+{len(violations) - 5} more)" if len(violations) > 5 else ""
        super().__init__(f"{len(violations)} metric violation(s): {head}{more}")


def default_axiom_tol(matrix: np.ndarray) -> float:
    if matrix.size == 0:
        return 0.0
    return 1e-9 * float(np.max(np.abs(matrix)))


def metric_violations(matrix, axiom_tol: float = 0.0, *, exhaustive: bool | None = None) -> list[MetricViolation]:
    """List every axiom failure of ``matrix`` exceeding ``axiom_tol``.

    Works on float arrays and on object arrays of ``fractions.Fraction`` (exact mode).
    Triangle violations report one witness (i, j, k) per offending (i, k) pair,
    the intermediate j being the one with the largest excess.
    """
    d = np.asarray(matrix)
    n = d.shape[0]
    out: list[MetricViolation] = []

    diag = np.abs(np.array([d[i, i] for i in range(n)], dtype=d.dtype))
    for i in np.flatnonzero(diag > axiom_tol):
        out.append(MetricViolation("nonzero-self", (int(i),), float(diag[i])))

    neg = -d
    for i, j in zip(*np.nonzero(neg > axiom_tol)):
        out.append(MetricViolation("negative", (int(i), int(j)), float(neg[i, j])))

    asym = np.abs(d - d.T)
    for i, j in zip(*np.nonzero(np.triu(asym > axiom_tol, 1))):
        out.append(MetricViolation("asymmetry", (int(i), int(j)), float(asym[i, j])))

    if exhaustive is None:
        exhaustive = n <= _EXHAUSTIVE_TRIANGLE_LIMIT
    if exhaustive:
        best = np.zeros((n, n), dtype=d.dtype)
        arg = np.zeros((n, n), dtype=np.int64)
        for j in range(n):
            excess = d - (d[:, j : j + 1] + d[j : j + 1, :])
            better = excess > best
            best = np.where(better, excess, best)
            arg[better] = j
        for i, k in zip(*np.nonzero(best > axiom_tol)):
            out.append(MetricViolation("triangle", (int(i), int(arg[i, k]), int(k)), float(best[i, k])))
    else:
        # fixed seed so validation is reproducible
        rng = np.random.default_rng(0)
        i, j, k = rng.integers(0, n, size=(3, _SAMPLED_TRIPLES))
        excess = d[i, k] - (d[i, j] + d[j, k])
        seen = set()
        for t in np.flatnonzero(excess > axiom_tol):
            key = (int(i[t]), int(k[t]))
            if key not in seen:
                seen.add(key)
                out.append(MetricViolation("triangle", (int(i[t]), int(j[t]), int(k[t])), float(excess[t])))
    return out


class FiniteMetricSpace:
    """Labeled points with a validated dense distance matrix.

    Instances are immutable: the matrix is stored read-only.
    """

    __slots__ = ("labels", "dist", "axiom_tol", "coords", "metric")

    def __init__(self, labels: Sequence[str], dist: np.ndarray, axiom_tol: float,
                 coords: np.ndarray | None = None, metric: str | None = None):
        self.labels = tuple(labels)
        self.dist = dist
        self.axiom_tol = axiom_tol
        self.coords = coords
        self.metric = metric

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def __repr__(self) -> str:
        return f"FiniteMetricSpace(n={self.n}, axiom_tol={self.axiom_tol:g})"


def _check_labels(labels: Sequence[str], n: int) -> list[str]:
    labels = [str(x) for x in labels]
    if len(labels) != n:
        raise ValueError(f"{len(labels)} labels for a {n}x{n} matrix")
    if n < 1:
        raise ValueError("a metric space needs at least one point")
    if len(set(labels)) != n:
        dup = sorted({x for x in labels if labels.count(x) > 1})
        raise ValueError(f"duplicate labels: {dup}")
    return labels


def build_space_from_matrix(labels: Sequence[str], matrix, axiom_tol: float | None = None) -> FiniteMetricSpace:
    d = np.array(matrix, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError(f"distance matrix must be square, got shape {d.shape}")
    labels = _check_labels(labels, d.shape[0])
    if not np.all(np.isfinite(d)):
        raise ValueError("distance matrix has non-finite entries")
    if axiom_tol is None:
        axiom_tol = default_axiom_tol(d)
    if axiom_tol < 0:
        raise ValueError("axiom_tol must be nonnegative")
    violations = metric_violations(d, axiom_tol)
    if violations:
        raise MetricError(violations)
    # symmetrize exactly so that ball membership never depends on argument order
    d = np.minimum(d, d.T)
    np.fill_diagonal(d, 0.0)
    d.setflags(write=False)
    return FiniteMetricSpace(labels, d, float(axiom_tol))


def pairwise(coords: np.ndarray, metric_name: str) -> np.ndarray:
    diff = np.abs(coords[:, None, :] - coords[None, :, :])
    if metric_name == "l1":
        return diff.sum(axis=-1)
    if metric_name == "chebyshev":
        return diff.max(axis=-1)
    if metric_name == "euclidean":
        return np.sqrt((diff * diff).sum(axis=-1))
    raise ValueError(f"unknown metric {metric_name!r}; expected one of {METRICS}")


def build_space_from_points(coords, metric_name: str = "euclidean", axiom_tol: float | None = None,
                            labels: Sequence[str] | None = None) -> FiniteMetricSpace:
    if metric_name not in METRICS:
        raise ValueError(f"unknown metric {metric_name!r}; expected one of {METRICS}")
    rows = [list(np.atleast_1d(c)) for c in coords]
    if not rows:
        raise ValueError("a metric space needs at least one point")
    dims = {len(r) for r in rows}
    if len(dims) != 1:
        raise ValueError(f"ragged coordinates: dimensions {sorted(dims)}")
    if 0 in dims:
        raise ValueError("coordinates must have dimension >= 1")
    x = np.array(rows, dtype=float)
    if labels is None:
        labels = [str(i) for i in range(len(rows))]
    d = pairwise(x, metric_name)
    space = build_space_from_matrix(labels, d, axiom_tol)
    x.setflags(write=False)
    space.coords = x
    space.metric = metric_name
    return space


def point_set(space: FiniteMetricSpace, indices: Iterable[int], allow_empty: bool = True) -> tuple[int, ...]:
    """Normalize ``indices`` into a sorted duplicate-free tuple, checking bounds."""
    s = tuple(sorted({int(i) for i in indices}))
    if s and (s[0] < 0 or s[-1] >= space.n):
        raise IndexError(f"point index out of range for a space of {space.n} points")
    if not s and not allow_empty:
        raise ValueError("point set must be nonempty")
    return s


def diameter(space: FiniteMetricSpace, A: Iterable[int]) -> float:
    idx = np.fromiter(point_set(space, A, allow_empty=False), dtype=np.int64)
    return float(space.dist[np.ix_(idx, idx)].max())


def isolation(space: FiniteMetricSpace, i: int) -> float:
    """Distance from point ``i`` to the rest of the space."""
    if space.n < 2:
        raise ValueError("isolation is undefined on a singleton space")
    row = np.delete(space.dist[i], i)
    return float(row.min())


def ball(space: FiniteMetricSpace, center: int, radius: float, closed: bool = False) -> tuple[int, ...]:
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    row = space.dist[center]
    mask = row <= radius if closed else row < radius
    return tuple(int(j) for j in np.flatnonzero(mask))
