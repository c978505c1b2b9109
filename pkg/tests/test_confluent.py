import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charpoly.confluent import cluster_points, det_ratio, log_det_ratio
from charpoly.dualities import hciz_exp_deriv


def test_cluster_points_grouping():
    reps, cl, order, counts = cluster_points([1.0, 1.0 + 1e-10, 2.0, 1.0 - 1e-10])
    assert len(reps) == 2
    assert cl == [0, 0, 1, 0]
    assert order == [0, 1, 0, 2]
    assert counts == [3, 1]


def _direct_ratio(u, v):
    m = np.array([[cmath.exp(a * b) for b in v] for a in u])
    vand = 1.0 + 0.0j
    for j in range(len(u)):
        for i in range(j):
            vand *= (u[j] - u[i]) * (v[j] - v[i])
    return np.linalg.det(m) / vand


@given(st.integers(0, 500))
@settings(max_examples=30, deadline=None)
def test_det_ratio_matches_direct_for_distinct(seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, 5))
    u = rng.normal(size=k) + 1j * rng.normal(size=k)
    v = rng.normal(size=k) + 1j * rng.normal(size=k)
    got = det_ratio(list(u), list(v), hciz_exp_deriv)
    want = _direct_ratio(u, v)
    assert got == pytest.approx(want, rel=1e-7)


def test_confluent_limit_vs_epsilon_separation():
    u = [0.3 + 0.2j, 0.3 + 0.2j]
    v = [0.1, 0.9]
    conf = det_ratio(u, v, hciz_exp_deriv)
    eps = 1e-6
    sep = det_ratio([u[0], u[0] + eps], v, hciz_exp_deriv)
    assert conf == pytest.approx(sep, rel=1e-5)


def test_full_confluence_k1_reduction():
    # all points merged: ratio = exp(uv) second derivative structure
    u = [0.4, 0.4]
    v = [0.7, 0.7]
    got = det_ratio(u, v, hciz_exp_deriv)
    # det{[f, f_v],[f_u, f_uv]} with f = e^{uv}) / (0!1!)^2 weights included
    f = math.exp(0.4 * 0.7)
    m = np.array([[f, 0.4 * f], [0.7 * f, (1 + 0.4 * 0.7) * f]])
    assert got == pytest.approx(np.linalg.det(m), rel=1e-12)


def test_log_det_ratio_consistent_with_value():
    u = [0.5, -0.2 + 0.1j, 0.5]
    v = [0.3, 0.8, 1.2]
    lg = log_det_ratio(u, v, hciz_exp_deriv)
    assert cmath.exp(lg) == pytest.approx(det_ratio(u, v, hciz_exp_deriv), rel=1e-10)
