"""Tolerance-parameterized checks for property P, Menger convexity and metric convexity.

Exact versions of these properties are essentially never true on finite
samples, so every check takes an explicit ``tol``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .space import FiniteMetricSpace


@dataclass(frozen=True)
class SpectrumReport:
    basepoint: int
    sorted_distances: tuple[float, ...]
    sup: float
    max_gap: float
    gap_location: tuple[float, float]


@dataclass
class ConvexityReport:
    kind: str  # property-P | menger | metric-convex
    tol: float
    violations: list[dict] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.violations


def spectrum(space: FiniteMetricSpace, x: int) -> SpectrumReport:
    d = np.sort(space.dist[x], kind="stable")
    if d.size == 1:
        return SpectrumReport(x, (0.0,), 0.0, 0.0, (0.0, 0.0))
    gaps = np.diff(d)
    k = int(np.argmax(gaps))
    return SpectrumReport(x, tuple(float(v) for v in d), float(d[-1]), float(gaps[k]),
                          (float(d[k]), float(d[k + 1])))


def property_p_check(space: FiniteMetricSpace, tol: float) -> ConvexityReport:
    """Every radius in [0, sup) from every basepoint is within tol of an attained distance.

    Equivalently each consecutive gap of the distance spectrum is at most
    2*tol. One violation per basepoint: the midpoint of its widest gap.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    report = ConvexityReport("property-P", float(tol))
    if space.n == 1:
        return report
    d = np.sort(space.dist, axis=1)
    gaps = np.diff(d, axis=1)
    widest = np.argmax(gaps, axis=1)
    for x in np.flatnonzero(gaps.max(axis=1) > 2 * tol):
        k = widest[x]
        lo, hi = float(d[x, k]), float(d[x, k + 1])
        report.violations.append({"point": int(x), "r": (lo + hi) / 2, "gap": hi - lo})
    return report


@njit(cache=True, nogil=True)
def _menger_block(dist, tol, x0, x1, out):
    """Interval sweep for all pairs (x, y), y > x, x in [x0, x1).

    For the pair (x, y), z certifies exactly the r in
    [d(x,z) - tol, d(x,y) - d(y,z) + tol]. Scanning z by increasing d(x,z)
    while tracking the covered prefix [0, reach] finds the first uncovered
    stretch; out[x - x0, y] gets its midpoint, or NaN if [0, d(x,y)] is covered.
    """
    n = dist.shape[0]
    for x in range(x0, x1):
        order = np.argsort(dist[x], kind="mergesort")
        for y in range(x + 1, n):
            dxy = dist[x, y]
            reach = -np.inf
            r = np.nan
            for j in range(n):
                z = order[j]
                a = dist[x, z] - tol
                if a > reach and a > 0 and reach < dxy:
                    left = reach if reach > 0 else 0.0
                    right = a if a < dxy else dxy
                    r = (left + right) / 2
                    break
                b = dxy - dist[y, z] + tol
                if b >= a and b > reach:
                    reach = b
                    if reach >= dxy:
                        break
            if reach < dxy and np.isnan(r):
                r = dxy
            out[x - x0, y] = r


def _menger_rows(dist: np.ndarray, tol: float, xs: range) -> list[dict]:
    out = np.full((len(xs), dist.shape[0]), np.nan)
    if len(xs):
        _menger_block(dist, float(tol), xs.start, xs.stop, out)
    rows, ys = np.nonzero(~np.isnan(out))
    return [{"pair": [xs.start + int(i), int(y)], "r": float(out[i, y])} for i, y in zip(rows, ys)]


def menger_check(space: FiniteMetricSpace, tol: float, threads: int = 1) -> ConvexityReport:
    """Closed balls B[x, r] and B[y, d(x,y) - r] meet (up to tol) for every pair and r in [0, d(x,y)].

    A violation records the pair and the midpoint of the first uncovered
    stretch of r.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    n = space.n
    # contiguous basepoint blocks keep the concatenated output ordered
    blocks = max(1, min(threads, n))
    edges = np.linspace(0, n, blocks + 1).astype(int)
    ranges = [range(a, b) for a, b in zip(edges[:-1], edges[1:])]
    if blocks == 1:
        parts = [_menger_rows(np.ascontiguousarray(space.dist), tol, ranges[0])]
    else:
        with ThreadPoolExecutor(max_workers=blocks) as pool:
            parts = list(pool.map(lambda xs: _menger_rows(np.ascontiguousarray(space.dist), tol, xs), ranges))
    report = ConvexityReport("menger", float(tol))
    for p in parts:
        report.violations.extend(p)
    return report


def menger_pair_covered(space: FiniteMetricSpace, x: int, y: int, tol: float) -> bool:
    """Single-pair Menger coverage by a plain sort-and-merge of the certifying intervals."""
    d = space.dist
    dxy = d[x, y]
    intervals = sorted((d[x, z] - tol, dxy - d[y, z] + tol) for z in range(space.n))
    reach = -math.inf  # [0, reach] is covered so far
    for a, b in intervals:
        if a > b:
            continue
        if a > reach and a > 0 and reach < dxy:
            return False
        reach = max(reach, b)
    return reach >= dxy


def metric_defects(space: FiniteMetricSpace) -> tuple[np.ndarray, np.ndarray]:
    """Best between-point defect min_z |d(x,z) + d(z,y) - d(x,y)| over z not in {x, y}, and its argmin."""
    d = space.dist
    n = space.n
    defect = np.full((n, n), np.inf)
    arg = np.full((n, n), -1, dtype=np.int64)
    if n < 3:
        return defect, arg
    for x in range(n):
        dev = np.abs(d[x][None, :] + d - d[x][:, None])  # [y, z]
        dev[:, x] = np.inf
        dev[np.arange(n), np.arange(n)] = np.inf
        arg[x] = np.argmin(dev, axis=1)
        defect[x] = dev[np.arange(n), arg[x]]
    return defect, arg


def metric_convexity_check(space: FiniteMetricSpace, tol: float) -> ConvexityReport:
    """Every pair x != y has some z outside {x, y} with |d(x,z) + d(z,y) - d(x,y)| <= tol."""
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    report = ConvexityReport("metric-convex", float(tol))
    defect, arg = metric_defects(space)
    for x in range(space.n):
        for y in range(x + 1, space.n):
            if defect[x, y] > tol:
                z = int(arg[x, y])
                report.violations.append({"pair": [x, y], "defect": float(defect[x, y]),
                                          "z": None if z < 0 or math.isinf(defect[x, y]) else z})
    return report
