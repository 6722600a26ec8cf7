from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from metriclab.space import (
    MetricError,
    ball,
    build_space_from_matrix,
    build_space_from_points,
    default_axiom_tol,
    diameter,
    isolation,
    metric_violations,
)
from helpers import random_cloud, random_metric


def test_singleton_is_valid():
    s = build_space_from_matrix(["a"], [[0]])
    assert s.n == 1 and s.dist[0, 0] == 0


def test_asymmetric_matrix_reports_witness():
    with pytest.raises(MetricError) as exc:
        build_space_from_matrix(["a", "b"], [[0, 1], [2, 0]])
    v = exc.value.violations
    assert [(x.kind, x.witness, x.magnitude) for x in v] == [("asymmetry", (0, 1), 1.0)]


def test_line_matrix(line013):
    assert line013.dist[0, 2] == 3
    assert metric_violations(line013.dist, 0.0) == []


def test_all_violation_kinds_listed():
    m = [[0.5, 1, 5], [1, 0, -1], [5, -1, 0]]
    kinds = {v.kind for v in metric_violations(np.array(m), 0.0)}
    assert kinds == {"nonzero-self", "negative", "triangle"}


def test_triangle_within_tolerance_is_accepted():
    m = [[0, 1, 2.0000001], [1, 0, 1], [2.0000001, 1, 0]]
    with pytest.raises(MetricError):
        build_space_from_matrix("abc", m, axiom_tol=0.0)
    assert build_space_from_matrix("abc", m, axiom_tol=1e-6).n == 3


def test_duplicate_labels_rejected():
    with pytest.raises(ValueError, match="duplicate"):
        build_space_from_matrix(["a", "a"], [[0, 1], [1, 0]])


def test_default_tol_scales_with_entries():
    assert default_axiom_tol(np.array([[0, 4.0], [4.0, 0]])) == pytest.approx(4e-9)


def test_exact_fractions_validate_with_zero_tolerance():
    third = Fraction(1, 3)
    m = np.array([[Fraction(0), third, 1 - third], [third, Fraction(0), third], [1 - third, third, Fraction(0)]],
                 dtype=object)
    assert metric_violations(m, 0) == []


@pytest.mark.parametrize("metric,pts,expected", [
    ("chebyshev", [(0, 0), (1, 1)], 1.0),
    ("euclidean", [(0, 0), (3, 4)], 5.0),
    ("l1", [(0, 0), (1, 2)], 3.0),
])
def test_named_metrics(metric, pts, expected):
    assert build_space_from_points(pts, metric).dist[0, 1] == expected


def test_points_errors():
    with pytest.raises(ValueError, match="unknown metric"):
        build_space_from_points([(0,), (1,)], "cosine")
    with pytest.raises(ValueError, match="ragged"):
        build_space_from_points([(0,), (1, 2)], "l1")


def test_dist_is_read_only(line013):
    with pytest.raises(ValueError):
        line013.dist[0, 1] = 7


def test_diameter_and_isolation(line013):
    assert diameter(line013, [0]) == 0
    assert diameter(line013, [0, 1, 2]) == 3
    assert diameter(line013, [0, 1]) == 1
    assert isolation(line013, 0) == 1
    assert isolation(line013, 2) == 2
    with pytest.raises(ValueError):
        diameter(line013, [])
    with pytest.raises(ValueError):
        isolation(build_space_from_matrix(["a"], [[0]]), 0)


def test_coincident_point_has_zero_isolation():
    s = build_space_from_points([(0,), (0,), (2,)], "euclidean")
    assert isolation(s, 0) == 0 and isolation(s, 2) == 2


def test_balls(line013):
    assert ball(line013, 0, 1.5) == (0, 1)
    assert ball(line013, 0, 0) == ()
    assert ball(line013, 0, 0, closed=True) == (0,)
    assert ball(line013, 0, 1) == (0,)
    assert ball(line013, 0, 1, closed=True) == (0, 1)


def test_sampled_triangle_check_catches_gross_violation():
    rng = np.random.default_rng(0)
    d = random_metric(rng, 600).dist.copy()
    d[:, 0] *= 10.0
    d[0, :] *= 10.0
    kinds = {v.kind for v in metric_violations(d, 1e-9)}
    assert "triangle" in kinds


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 25), st.integers(0, 2**32 - 1))
def test_random_spaces_satisfy_axioms(n, seed):
    rng = np.random.default_rng(seed)
    for s in (random_metric(rng, n), random_cloud(rng, n)):
        d = s.dist
        assert np.array_equal(d, d.T) and np.all(np.diag(d) == 0)
        assert np.all(d[:, :, None] <= d[:, None, :] + d.T[None, :, :] + s.axiom_tol)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 20), st.integers(0, 2**32 - 1))
def test_diameter_monotone_and_balls_nested(n, seed):
    rng = np.random.default_rng(seed)
    s = random_cloud(rng, n)
    A = sorted(rng.choice(n, size=rng.integers(1, n + 1), replace=False).tolist())
    B = sorted(set(A) | set(rng.choice(n, size=rng.integers(1, n + 1)).tolist()))
    assert diameter(s, A) <= diameter(s, B)
    r1, r2 = sorted(rng.uniform(0, 1.5, size=2))
    c = int(rng.integers(n))
    assert set(ball(s, c, r1)) <= set(ball(s, c, r2))
    assert set(ball(s, c, r1)) <= set(ball(s, c, r1, closed=True))
    assert (isolation(s, c) > 0) == (np.count_nonzero(s.dist[c] == 0) == 1)
