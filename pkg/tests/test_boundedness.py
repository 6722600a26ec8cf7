import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from metriclab.boundedness import (
    covering_profile,
    exact_max_packing_size,
    exact_min_net_size,
    greedy_eps_net,
    max_separated_subset,
)
from metriclab.space import build_space_from_matrix, build_space_from_points
from helpers import line, random_cloud, random_metric


def test_net_examples(line013):
    net = greedy_eps_net(line013, 1)
    assert net.centers == (0, 2) and net.assignment == {0: 0, 1: 0, 2: 2}
    assert net.is_valid(line013)
    assert greedy_eps_net(line013, 3).centers == (0,)
    assert sorted(greedy_eps_net(line013, 0.99).centers) == [0, 1, 2]


def test_net_farthest_first_order():
    s = line(0, 1, 2, 10, 5)
    assert greedy_eps_net(s, 1).centers == (0, 3, 4, 2)


def test_packing_examples(line013):
    assert max_separated_subset(line013, 1).indices == (0, 2)
    assert max_separated_subset(line013, 0).indices == (0, 1, 2)
    assert max_separated_subset(line013, 3).indices == (0,)


def test_packing_is_strict():
    s = line(0, 1, 2)
    assert max_separated_subset(s, 1).indices == (0, 2)
    assert max_separated_subset(s, 0.999).indices == (0, 1, 2)


def test_target_restriction(line013):
    assert greedy_eps_net(line013, 1, target=[1, 2]).centers == (1, 2)
    assert max_separated_subset(line013, 1.5, target=[1, 2]).indices == (1, 2)


def test_profile_examples(line013):
    single = build_space_from_matrix(["a"], [[0]])
    assert covering_profile(single, [0.5, 3]) == {0.5: (1, 1), 3.0: (1, 1)}
    assert covering_profile(line013, [1, 3]) == {1.0: (2, 2), 3.0: (1, 1)}
    with pytest.raises(ValueError):
        covering_profile(line013, [0])


def test_packing_column_need_not_be_monotone():
    # greedy packing in index order picks A, B at 0.9 but A, C, D at 1.1
    s = build_space_from_points([(0, 0), (1, 0), (1.5, 0.7), (1.5, -0.7)])
    prof = covering_profile(s, [0.9, 1.1])
    assert prof[0.9][1] == 2 and prof[1.1][1] == 3
    assert prof[0.9][0] >= prof[1.1][0]


def test_exact_oracles(line013):
    assert exact_min_net_size(line013, 1) == 2
    assert exact_min_net_size(line013, 1.5) == 2
    assert exact_min_net_size(line013, 2) == 1
    assert exact_max_packing_size(line013, 1) == 2
    assert exact_max_packing_size(line013, 0.5) == 3


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 60), st.integers(0, 2**32 - 1), st.floats(0.02, 1.0))
def test_net_and_packing_laws(n, seed, eps):
    rng = np.random.default_rng(seed)
    s = random_metric(rng, n) if seed % 2 else random_cloud(rng, n)
    net = greedy_eps_net(s, eps)
    pack = max_separated_subset(s, eps)
    assert net.is_valid(s) and sorted(net.assignment) == list(range(n))
    # farthest-point centers are themselves separated
    assert type(pack)(eps, net.centers).is_valid(s)
    assert pack.is_valid(s)
    # maximal: every excluded point is within eps of the packing, so the packing is a net
    d = s.dist[:, list(pack.indices)]
    assert np.all(d.min(axis=1) <= eps)
    assert len(pack.indices) <= len(greedy_eps_net(s, eps / 2).centers)
    assert len(net.centers) >= len(greedy_eps_net(s, 2 * eps).centers)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 11), st.integers(0, 2**32 - 1), st.floats(0.05, 0.8))
def test_sandwich_against_exact_oracles(n, seed, eps):
    rng = np.random.default_rng(seed)
    s = random_cloud(rng, n)
    m_net = exact_min_net_size(s, eps)
    greedy_pack = len(max_separated_subset(s, eps).indices)
    assert m_net <= len(greedy_eps_net(s, eps).centers)
    assert m_net <= greedy_pack <= exact_max_packing_size(s, eps) <= exact_min_net_size(s, eps / 2)
