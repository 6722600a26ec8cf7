import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from metriclab.convexity import (
    menger_check,
    menger_pair_covered,
    metric_convexity_check,
    metric_defects,
    property_p_check,
    spectrum,
)
from metriclab.space import build_space_from_matrix
from helpers import line, random_cloud, random_metric


def test_spectrum_examples(line012):
    rep = spectrum(line012, 0)
    assert rep.sorted_distances == (0, 1, 2) and rep.sup == 2 and rep.max_gap == 1
    rep = spectrum(build_space_from_matrix(["a"], [[0]]), 0)
    assert rep.sorted_distances == (0,) and rep.sup == 0 and rep.max_gap == 0
    assert spectrum(line(0, 5), 0).max_gap == 5


def test_property_p_examples(line012):
    assert property_p_check(line012, 0.5).holds
    rep = property_p_check(line012, 0.4)
    assert not rep.holds and rep.violations[0] == {"point": 0, "r": 0.5, "gap": 1.0}
    assert property_p_check(build_space_from_matrix(["a"], [[0]]), 0).holds
    with pytest.raises(ValueError):
        property_p_check(line012, -1)


def test_menger_examples(line012):
    rep = menger_check(line012, 0)
    assert not rep.holds and {"pair": [0, 2], "r": 0.5} in rep.violations
    assert menger_check(line012, 0.5).holds
    rep = menger_check(line(0, 3), 0)
    assert rep.violations == [{"pair": [0, 1], "r": 1.5}]
    assert menger_check(line(0, 0), 0).holds


def test_metric_convexity_examples(line012):
    rep = metric_convexity_check(line012, 0)
    assert [v["pair"] for v in rep.violations] == [[0, 1], [1, 2]]
    assert rep.violations[0]["defect"] == 2 and rep.violations[0]["z"] == 2
    assert not metric_convexity_check(line(0, 0.5, 1, 1.5, 2), 0).holds
    tri = build_space_from_matrix("abc", [[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    assert metric_convexity_check(tri, 1).holds
    assert not metric_convexity_check(line(0, 1), 5).holds


def _p_by_grid(space, tol):
    """Radius grid of step tol/4: every r below sup within tol of an attained distance."""
    for x in range(space.n):
        row = np.sort(space.dist[x])
        grid = np.arange(0.0, row[-1], tol / 4)
        near = np.abs(grid[:, None] - row[None, :]).min(axis=1)
        if np.any(near > tol + 1e-12):
            return False
    return True


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 15), st.integers(0, 2**32 - 1), st.floats(0.05, 0.4))
def test_property_p_matches_grid_oracle(n, seed, tol):
    s = random_cloud(np.random.default_rng(seed), n)
    gaps = np.diff(np.sort(s.dist, axis=1), axis=1)
    # stay clear of the knife edge where the grid can step over a gap of exactly 2*tol
    if n > 1 and np.any(np.abs(gaps - 2 * tol) < tol / 2):
        return
    assert property_p_check(s, tol).holds == _p_by_grid(s, tol)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 25), st.integers(0, 2**32 - 1), st.floats(0.0, 0.5))
def test_menger_kernel_matches_oracle(n, seed, tol):
    s = random_cloud(np.random.default_rng(seed), n)
    bad = {tuple(v["pair"]) for v in menger_check(s, tol).violations}
    oracle = {(x, y) for x in range(n) for y in range(x + 1, n) if not menger_pair_covered(s, x, y, tol)}
    assert bad == oracle


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 20), st.integers(0, 2**32 - 1), st.floats(0.0, 0.3))
def test_checks_monotone_in_tol(n, seed, tol):
    s = random_cloud(np.random.default_rng(seed), n)
    for check in (property_p_check, menger_check, metric_convexity_check):
        a = {str(v.get("pair", v.get("point"))) for v in check(s, tol).violations}
        b = {str(v.get("pair", v.get("point"))) for v in check(s, 2 * tol + 0.01).violations}
        assert b <= a


def test_menger_thread_count_does_not_change_output():
    s = random_cloud(np.random.default_rng(7), 90)
    base = menger_check(s, 0.05, threads=1).violations
    assert base
    for t in (2, 3, 8):
        assert menger_check(s, 0.05, threads=t).violations == base


def test_violations_sorted():
    s = random_metric(np.random.default_rng(1), 20)
    for rep in (menger_check(s, 0.01, threads=4), metric_convexity_check(s, 0.01)):
        pairs = [v["pair"] for v in rep.violations]
        assert pairs == sorted(pairs)


def test_short_pairs_break_the_slack_law():
    # endpoints alone certify every r in [0, 0.1] at tol 0.1, yet 5 is far from between
    s = line(0, 0.1, 5)
    tol = 0.1
    assert menger_pair_covered(s, 0, 1, tol)
    defect, _ = metric_defects(s)
    assert defect[0, 1] > 2 * tol


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 20), st.integers(0, 2**32 - 1), st.floats(0.01, 0.3))
def test_menger_implies_metric_convex_on_long_pairs(n, seed, tol):
    rng = np.random.default_rng(seed)
    s = random_metric(rng, n) if seed % 2 else random_cloud(rng, n)
    bad = {tuple(v["pair"]) for v in menger_check(s, tol).violations}
    defect, _ = metric_defects(s)
    for x in range(n):
        for y in range(x + 1, n):
            if (x, y) not in bad and s.dist[x, y] > 2 * tol:
                assert defect[x, y] <= 2 * tol + 1e-12
