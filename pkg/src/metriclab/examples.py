"""Finite models of the classical spaces and covers behind Lebesgue-number counterexamples.

Each generator returns an :class:`ExampleBundle`: the sampled space, its
named covers, and a list of expectations that re-check the claimed behaviour
at the sampling resolution. Infinite objects are always truncated by an
explicit parameter, and every expectation is phrased for the truncation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from . import boundedness, chains, convexity, covers
from .covers import Cover, CoverElement, ParametricBallFamily
from .space import FiniteMetricSpace, build_space_from_matrix, build_space_from_points, diameter, isolation


@dataclass
class Expectation:
    claim_id: str
    description: str
    expected: Any
    # check(tol) -> (passed, observed); tol is None for tolerance-free claims
    check: Callable[[float | None], tuple[bool, Any]]
    tol: float | None = None


@dataclass
class ExpectationResult:
    claim_id: str
    passed: bool
    expected: Any
    observed: Any
    tol: float | None


@dataclass
class ExampleBundle:
    name: str
    params: dict
    space: FiniteMetricSpace
    covers: dict[str, Cover]
    expectations: list[Expectation]
    provenance: str
    notes: list[str] = field(default_factory=list)

    def run(self, tol_overrides: dict[str, float] | None = None) -> list[ExpectationResult]:
        """Evaluate every expectation; ``tol_overrides`` replaces tolerances by claim id."""
        tol_overrides = tol_overrides or {}
        out = []
        for e in self.expectations:
            tol = tol_overrides.get(e.claim_id, e.tol)
            passed, observed = e.check(tol)
            out.append(ExpectationResult(e.claim_id, bool(passed), e.expected, observed, tol))
        return out


def _grid_1d(points: list[float], labels: list[str]) -> FiniteMetricSpace:
    # l1 in one dimension is |a - b|, the same float expression the harmonic radii use
    return build_space_from_points([[p] for p in points], "l1", labels=labels)


def _verify_witness(space: FiniteMetricSpace, cover: Cover, w, alpha: float) -> bool:
    if w is None:
        return False
    inside_some = any(set(w) <= set(pts) for _, pts in covers.realize(space, cover))
    return diameter(space, w) < alpha and not inside_some


# --- (0,1) u (1,2) ----------------------------------------------------------

def gen_two_intervals(N: int) -> ExampleBundle:
    """N midpoint samples of (0,1) u (1,2), covered by the two halves."""
    if N < 4 or N % 2:
        raise ValueError("N must be an even integer >= 4")
    half = N // 2
    pts = [(2 * k - 1) / N for k in range(1, half + 1)]
    labels = [f"{2 * k - 1}/{N}" for k in range(1, half + 1)]
    pts += [1 + p for p in pts]
    labels += [f"1+{lab}" for lab in labels]
    space = _grid_1d(pts, labels)
    left, right = range(half), range(half, N)
    cover = Cover((CoverElement.explicit(left, "(0,1)"), CoverElement.explicit(right, "(1,2)")))

    def cross_gap() -> float:
        return float(space.dist[np.ix_(list(left), list(right))].min())

    def check_cover(_):
        miss = covers.covers_check(space, cover)
        return miss is None, miss

    def check_exact(_):
        rep = covers.lebesgue_exact(space, cover)
        return rep.exact == cross_gap(), {"exact": rep.exact, "cross_gap": cross_gap(), "witness": rep.witness}

    def check_bound(_):
        exact = covers.lebesgue_exact(space, cover).exact
        return exact <= 4 / N, exact

    return ExampleBundle(
        "two_intervals", {"N": N}, space, {"halves": cover},
        [
            Expectation("two_intervals/covers", "the two halves cover the sample", "ok", check_cover),
            Expectation("two_intervals/exact-is-cross-gap",
                        "supremal Lebesgue number equals the smallest pair straddling 1", "equal", check_exact),
            Expectation("two_intervals/exact-le-4-over-N",
                        "supremal Lebesgue number shrinks with the sampling: exact <= 4/N", 4 / N, check_bound),
        ],
        "totally bounded union of two open intervals whose two-piece cover has no Lebesgue number",
        ["As N grows the supremal Lebesgue number tends to 0: the untruncated cover has none."],
    )


# --- {1/n} inside (0,2) ----------------------------------------------------

def gen_harmonic_in_02(N: int) -> ExampleBundle:
    """S = {1/n : n <= N} with the balls B(1/n, 1/n - 1/(n+1))."""
    if N < 2:
        raise ValueError("N must be >= 2")
    space = _grid_1d([1.0 / n for n in range(1, N + 1)], [f"1/{n}" for n in range(1, N + 1)])
    cover = Cover(families=(ParametricBallFamily(N, tuple(range(N)), "harmonic", label="B"),))
    tail = list(range(N // 2, N))  # n > N/2

    def check_cover(_):
        miss = covers.covers_check(space, cover)
        return miss is None, miss

    def check_singletons(_):
        sizes = [len(pts) for _, pts in covers.realize(space, cover)]
        own = all(pts == (i,) for i, (_, pts) in enumerate(covers.realize(space, cover)))
        return own, {"max_ball_size": max(sizes)}

    def check_subcover_all(_):
        res = covers.finite_subcover(space, cover, range(N))
        return res.ok and len(res.labels) == N, len(res.labels)

    def check_subcover_tail(_):
        res = covers.finite_subcover(space, cover, tail)
        return res.ok and len(res.labels) == len(tail), len(res.labels)

    return ExampleBundle(
        "harmonic_in_02", {"N": N}, space, {"harmonic": cover},
        [
            Expectation("harmonic_in_02/covers", "the truncated family covers S", "ok", check_cover),
            Expectation("harmonic_in_02/ball-is-own-center",
                        "each open ball contains exactly its own center", True, check_singletons),
            Expectation("harmonic_in_02/subcover-size-N", "greedy subcover of S needs all N balls", N,
                        check_subcover_all),
            Expectation("harmonic_in_02/tail-no-sharing",
                        "the tail {1/n : n > N/2} needs one ball per point", len(tail), check_subcover_tail),
        ],
        "totally bounded subset {1/n} of the incomplete space (0,2) with a locally finite ball cover",
        ["Untruncated: for every eps the tail {1/n : 1/n < eps} has no finite subcover "
         "(recorded, not checked; the ambient space is not complete)."],
    )


# --- (0,1] -----------------------------------------------------------------

def unit_left_open_points(N: int) -> tuple[list[float], list[str], int]:
    """Harmonic points 1/n (n <= N) first, then the uniform fill k/(4N) not already present."""
    M = 4 * N
    pts = [1.0 / n for n in range(1, N + 1)]
    labels = [f"1/{n}" for n in range(1, N + 1)]
    harmonic = {Fraction(1, n) for n in range(1, N + 1)}
    for k in range(1, M + 1):
        if Fraction(k, M) not in harmonic:
            pts.append(k / M)
            labels.append(f"{k}/{M}")
    return pts, labels, N


def gen_unit_left_open(N: int) -> ExampleBundle:
    """Dense sample of (0,1] with the harmonic ball family truncated at N."""
    if N < 2:
        raise ValueError("N must be >= 2")
    pts, labels, _ = unit_left_open_points(N)
    space = _grid_1d(pts, labels)
    fam = ParametricBallFamily(N, tuple(range(N)), "harmonic", label="B")
    full = Cover(families=(fam,))
    _, mem = covers.membership(space, full)
    covered = tuple(int(i) for i in np.flatnonzero(mem.any(axis=0)))
    restricted = full.with_target(covered)
    one = Cover(families=(fam,), target=(0,))
    alphas = []
    a = 0.5
    while a >= 4 / N:
        alphas.append(a)
        a /= 2

    def check_truncation(_):
        keep = set(covered)
        miss = [i for i in range(space.n) if i not in keep]
        below = all(pts[i] <= 1 / (N + 1) for i in miss)
        return bool(miss) and below, {"uncovered": len(miss), "max_uncovered": max(pts[i] for i in miss) if miss else None}

    def check_restricted(_):
        miss = covers.covers_check(space, restricted)
        return miss is None, miss

    def check_grid(_):
        found = {}
        for alpha in alphas:
            w = covers.lebesgue_witness(space, restricted, alpha)
            found[alpha] = list(w) if w is not None and _verify_witness(space, restricted, w, alpha) else None
        return all(v is not None for v in found.values()), {"alphas": alphas, "witnesses": list(found.values())}

    def check_bracket(_):
        rep = covers.lebesgue_exact(space, restricted)
        above = covers.lebesgue_witness(space, restricted, rep.exact * (1 + 1e-6))
        at = covers.lebesgue_witness(space, restricted, rep.exact)
        return above is not None and at is None, {"exact": rep.exact, "ball_bound": rep.ball_bound}

    def check_singleton(_):
        rep = covers.lebesgue_exact(space, one)
        return rep.exact == float("inf") and rep.witness is None, rep.exact

    return ExampleBundle(
        "unit_left_open", {"N": N, "fill": 4 * N}, space, {"harmonic": full, "harmonic-covered": restricted},
        [
            Expectation("unit_left_open/truncation-gap",
                        "the truncated family misses only points at or below 1/(N+1)", "fails below 1/(N+1)",
                        check_truncation),
            Expectation("unit_left_open/covers-covered-region", "restricted to the covered points it is a cover",
                        "ok", check_restricted),
            Expectation("unit_left_open/witness-grid",
                        "every alpha on the halving grid down to 4/N is refuted by a witness", "all found",
                        check_grid),
            Expectation("unit_left_open/bracket",
                        "no witness at the supremal Lebesgue number, one just above it", True, check_bracket),
            Expectation("unit_left_open/singleton-target", "a target inside one ball has no bad set", "inf",
                        check_singleton),
        ],
        "connected, totally bounded (0,1] whose locally finite harmonic ball cover has no Lebesgue number",
        ["Witnesses are adjacent harmonic points 1/(n+1), 1/n; their distance 1/(n(n+1)) is the scale "
         "at which the truncation stops refuting alpha."],
    )


# --- l1 ---------------------------------------------------------------------

def l1_exact_matrix(M: int, N: int) -> tuple[list[str], list[list[Fraction]]]:
    """Exact l1 distances between the points e_m/n (m <= M, n <= N) and the origin."""
    pts = [(m, Fraction(1, n)) for m in range(1, M + 1) for n in range(1, N + 1)]
    labels = [f"e{m}/{1 / v}" for m, v in pts] + ["0"]

    def d(p, q):
        if p is None and q is None:
            return Fraction(0)
        if p is None or q is None:
            return (q or p)[1]
        if p[0] == q[0]:
            return abs(p[1] - q[1])
        return p[1] + q[1]

    allp = pts + [None]
    return labels, [[d(p, q) for q in allp] for p in allp]


def gen_l1_family(M: int, N: int) -> ExampleBundle:
    """The points e_m/n of l1 (m <= M, n <= N) together with the origin."""
    if M < 1 or N < 1:
        raise ValueError("M and N must be >= 1")
    labels, exact = l1_exact_matrix(M, N)
    space = build_space_from_matrix(labels, [[float(v) for v in row] for row in exact])
    units = [m * N for m in range(M)]  # e_m/1

    def check_units(_):
        sub = space.dist[np.ix_(units, units)]
        off = sub[~np.eye(M, dtype=bool)]
        return bool(np.all(off == 2.0)), float(off.min()) if off.size else None

    def check_separated(_):
        w = boundedness.max_separated_subset(space, 1.5)
        return len(w.indices) >= M and w.is_valid(space), len(w.indices)

    def check_isolated(_):
        iso = [isolation(space, i) for i in range(space.n)]
        return min(iso) > 0, min(iso)

    return ExampleBundle(
        "l1_family", {"M": M, "N": N}, space, {},
        [
            Expectation("l1_family/unit-distance-2", "d(e_m, e_k) = 2 for m != k", 2.0, check_units),
            Expectation("l1_family/separated-1.5", "a 1.5-separated subset with at least M points", M,
                        check_separated),
            Expectation("l1_family/isolation-positive", "every point is isolated", "> 0", check_isolated),
        ],
        "subset of l1 on which every cover by open sets has a Lebesgue number, yet not totally bounded",
        ["Atsujiness itself quantifies over all covers of an infinite set and is not checked; "
         "only the positive isolation of every point is."],
    )


# --- two parallel lines ----------------------------------------------------

def gen_parallel_lines(gap: float = 1.0, halfwidth: float = 8.0, N: int = 64) -> ExampleBundle:
    """N midpoint samples on each of the segments y = 0 and y = gap, |x| <= halfwidth."""
    if not gap > 0 or not halfwidth > 0 or N < 2:
        raise ValueError("need gap > 0, halfwidth > 0 and N >= 2")
    step = 2 * halfwidth / N
    xs = [-halfwidth + (k + 0.5) * step for k in range(N)]
    coords = [(x, 0.0) for x in xs] + [(x, gap) for x in xs]
    labels = [f"L0[{k}]" for k in range(N)] + [f"L1[{k}]" for k in range(N)]
    space = build_space_from_points(coords, "euclidean", labels=labels)
    mid = N // 2
    cross = [mid, N + mid]
    split_eps = 0.4 * gap
    # any between-point of the cross pair has defect > step, so step is a safe failing tolerance
    convex_tol = min(gap / 4, step)

    def check_p(tol):
        rep = convexity.property_p_check(space, tol)
        return rep.holds, len(rep.violations)

    def check_split(_):
        parts = chains.eps_components(space, split_eps)
        return len(parts) >= 2, len(parts)

    def check_not_convex(tol):
        rep = convexity.metric_convexity_check(space, tol)
        hit = [v for v in rep.violations if v["pair"] == cross]
        return bool(hit), hit[0]["defect"] if hit else None

    return ExampleBundle(
        "parallel_lines", {"gap": gap, "halfwidth": halfwidth, "N": N}, space, {},
        [
            Expectation("parallel_lines/property-P", "distance spectra have no gaps beyond the sampling step",
                        "holds", check_p, tol=step),
            Expectation("parallel_lines/not-chainable", f"two eps-components at eps = {split_eps:g}", ">= 2",
                        check_split),
            Expectation("parallel_lines/not-metrically-convex",
                        "the cross pair at equal x has no between-point", "violation", check_not_convex,
                        tol=convex_tol),
        ],
        "union of two parallel lines: property P without chainability or metric convexity",
    )


# --- punctured plane, max metric -------------------------------------------

def gen_punctured_square_maxmetric(N: int) -> ExampleBundle:
    """N x N cell-center grid on [-2, 2]^2 minus the points within half a step of the unit circle."""
    if N < 8:
        raise ValueError("N must be >= 8")
    h = 4 / N
    g = [-2 + (k + 0.5) * h for k in range(N)]
    coords, labels = [], []
    for i, x in enumerate(g):
        for j, y in enumerate(g):
            if abs(np.hypot(x, y) - 1) >= h / 2:
                coords.append((x, y))
                labels.append(f"({i},{j})")
    space = build_space_from_points(coords, "chebyshev", labels=labels)
    inside = np.hypot(space.coords[:, 0], space.coords[:, 1]) < 1
    moat = float(space.dist[np.ix_(inside, ~inside)].min())
    # a pair across the disk on the x axis
    a = int(np.argmin(np.hypot(space.coords[:, 0] + 0.5, space.coords[:, 1])))
    b = int(np.argmin(np.hypot(space.coords[:, 0] - 0.5, space.coords[:, 1])))

    def check_menger(tol):
        rep = convexity.menger_check(space, tol)
        return rep.holds, len(rep.violations)

    def check_split(_):
        eps = moat * (1 - 1e-9)
        mixed = [p for p in chains.eps_components(space, eps) if inside[list(p)].any() and not inside[list(p)].all()]
        return not mixed, {"eps": eps, "moat": moat, "mixed_components": len(mixed)}

    def check_pair(tol):
        return convexity.menger_pair_covered(space, a, b, tol), [a, b]

    return ExampleBundle(
        "punctured_square", {"N": N}, space, {},
        [
            Expectation("punctured_square/menger", "Menger intervals cover every pair at one grid step",
                        "holds", check_menger, tol=h),
            Expectation("punctured_square/moat-split",
                        "below the moat width no eps-component mixes inside and outside", "split", check_split),
            Expectation("punctured_square/inside-pair", "a pair inside the disk is Menger-covered", "covered",
                        check_pair, tol=h),
        ],
        "plane minus the unit circle under the max metric: Menger convex but disconnected",
        [f"The moat between inside and outside is {moat / h:g} grid steps wide (diagonal neighbours "
         "straddle the removed band), so at eps equal to one grid step the sample is a single component.",
         "Menger coverage at exactly one grid step depends on how the grid meets the circle along the "
         "diagonals: it holds for N in {16, 32, 64} and needs about 1.25 steps for N in {24, 40, 48, 56}."],
    )


# --- adversarial cover from a separated sequence ----------------------------

ALPHA_FRACTIONS = (0.9, 0.5, 0.2, 0.1)


def gen_adversarial_from(space: FiniteMetricSpace, eps: float, name: str = "adversarial") -> ExampleBundle:
    """Balls of radius eps/(4n) around a maximal eps-separated sequence, plus the rest of the space.

    Witnesses are sought for alpha in eps * ALPHA_FRACTIONS above the
    resolution bound eps/(4|S|) + (chainability threshold): above it a chain
    leaving the smallest ball must land in the annulus a witness needs.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    sep = boundedness.max_separated_subset(space, eps)
    if len(sep.indices) < 2:
        raise ValueError(f"no pair of points more than {eps} apart")
    cover = covers.adversarial_cover(space, sep)
    delta = eps / 8
    resolution = eps / (4 * len(sep.indices)) + chains.chainability_threshold(space)
    alphas = [eps * f for f in ALPHA_FRACTIONS if eps * f >= resolution]

    def check_cover(_):
        miss = covers.covers_check(space, cover)
        return miss is None, miss

    def check_local(_):
        prof = covers.local_finiteness_profile(space, cover, delta)
        return prof.max_incidence <= 2, prof.max_incidence

    def check_grid(_):
        found = []
        for alpha in alphas:
            w = covers.lebesgue_witness(space, cover, alpha)
            found.append(list(w) if w is not None and _verify_witness(space, cover, w, alpha) else None)
        return all(v is not None for v in found), {"alphas": alphas, "resolution": resolution, "witnesses": found}

    return ExampleBundle(
        name, {"eps": eps, "separated": len(sep.indices)}, space, {"adversarial": cover},
        [
            Expectation(f"{name}/covers", "balls plus the complement of their centers cover the space", "ok",
                        check_cover),
            Expectation(f"{name}/locally-finite", f"every delta-ball (delta = {delta:g}) meets at most two members",
                        "<= 2", check_local),
            Expectation(f"{name}/witness-grid", "each alpha above the resolution bound is refuted", "all found",
                        check_grid),
        ],
        "cover built from an eps-separated sequence of a chainable space, locally finite without a Lebesgue number",
        [] if alphas else ["No alpha of the grid clears the resolution bound: the space is not chainable "
                           "at scale eps, so the construction certifies nothing here."],
    )


def gen_integer_points(n: int = 100) -> FiniteMetricSpace:
    return _grid_1d([float(k) for k in range(1, n + 1)], [str(k) for k in range(1, n + 1)])


def gen_adversarial_integers(n: int = 100, eps: float = 0.5) -> ExampleBundle:
    """The adversarial construction on {1..n}, where chainability fails: no small witnesses exist."""
    space = gen_integer_points(n)
    bundle = gen_adversarial_from(space, eps, "adversarial_integers")
    cover = bundle.covers["adversarial"]

    def check_exact(_):
        rep = covers.lebesgue_exact(space, cover)
        return rep.exact == 1.0, rep.exact

    bundle.expectations.append(Expectation(
        "adversarial_integers/lebesgue-is-spacing",
        "without chainability the cover keeps the Lebesgue number 1 (the spacing)", 1.0, check_exact))
    return bundle


# --- registry ---------------------------------------------------------------

def _adversarial_unit(N: int, eps: float = 0.1) -> ExampleBundle:
    pts, labels, _ = unit_left_open_points(N)
    return gen_adversarial_from(_grid_1d(pts, labels), eps, "adversarial_unit_left_open")


GENERATORS: dict[str, Callable[..., ExampleBundle]] = {
    "two_intervals": gen_two_intervals,
    "harmonic_in_02": gen_harmonic_in_02,
    "unit_left_open": gen_unit_left_open,
    "l1_family": gen_l1_family,
    "parallel_lines": gen_parallel_lines,
    "punctured_square": gen_punctured_square_maxmetric,
    "adversarial_unit_left_open": _adversarial_unit,
    "adversarial_integers": gen_adversarial_integers,
}

PRESETS: dict[str, dict[str, dict]] = {
    "small": {
        "two_intervals": {"N": 32},
        "harmonic_in_02": {"N": 32},
        "unit_left_open": {"N": 32},
        "l1_family": {"M": 10, "N": 10},
        "parallel_lines": {"gap": 1.0, "halfwidth": 8.0, "N": 64},
        "punctured_square": {"N": 32},
        "adversarial_unit_left_open": {"N": 32, "eps": 0.1},
        "adversarial_integers": {"n": 100, "eps": 0.5},
    },
    "medium": {
        "two_intervals": {"N": 128},
        "harmonic_in_02": {"N": 128},
        "unit_left_open": {"N": 128},
        "l1_family": {"M": 20, "N": 20},
        "parallel_lines": {"gap": 1.0, "halfwidth": 8.0, "N": 128},
        "punctured_square": {"N": 32},
        "adversarial_unit_left_open": {"N": 128, "eps": 0.1},
        "adversarial_integers": {"n": 200, "eps": 0.5},
    },
    "large": {
        "two_intervals": {"N": 512},
        "harmonic_in_02": {"N": 512},
        "unit_left_open": {"N": 512},
        "l1_family": {"M": 30, "N": 30},
        "parallel_lines": {"gap": 1.0, "halfwidth": 8.0, "N": 256},
        "punctured_square": {"N": 64},
        "adversarial_unit_left_open": {"N": 512, "eps": 0.1},
        "adversarial_integers": {"n": 400, "eps": 0.5},
    },
}


def build(name: str, **params) -> ExampleBundle:
    if name not in GENERATORS:
        raise KeyError(f"unknown example {name!r}; known: {sorted(GENERATORS)}")
    return GENERATORS[name](**params)
