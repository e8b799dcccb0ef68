import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from handplan.clustering import SeedMode, TaskAnchors, kmeans
from handplan.errors import TooFewSamples


def brute_force_inertia(x, k):
    """Best inertia over every assignment of rows to k labels."""
    best = np.inf
    for labels in itertools.product(range(k), repeat=len(x)):
        labels = np.array(labels)
        total = 0.0
        for j in range(k):
            m = x[labels == j]
            if len(m):
                total += ((m - m.mean(axis=0)) ** 2).sum()
        best = min(best, total)
    return best


def test_unit_square_corners():
    x = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=float)
    model = kmeans(x, 4, seed=0)
    assert model.inertia == 0.0
    assert sorted(model.sizes()) == [1, 1, 1, 1]


def test_two_groups_on_a_line():
    x = np.array([[0.0], [0.1], [10.0], [10.1]])
    oracle = brute_force_inertia(x, 2)
    assert oracle == pytest.approx(0.01)
    model = kmeans(x, 2, seed=1)
    assert model.inertia == pytest.approx(oracle, abs=1e-12)
    a = model.assignments
    assert a[0] == a[1] != a[2] == a[3]


def test_too_few_distinct_samples():
    x = np.array([[1.0, 1.0]] * 5 + [[2.0, 2.0]])
    with pytest.raises(TooFewSamples):
        kmeans(x, 3)
    with pytest.raises(TooFewSamples):
        kmeans(np.empty((0, 2)), 1)


def test_task_interpolated_seeding():
    rng = np.random.default_rng(0)
    x = np.concatenate([rng.normal(c, 0.05, (20, 2)) for c in ([0, 0], [1, 0], [2, 0])])
    anchors = TaskAnchors((0.0, 0.0), (2.0, 0.0))
    model = kmeans(x, 3, SeedMode.TASK_INTERPOLATED, anchors)
    assert model.seed_mode is SeedMode.TASK_INTERPOLATED
    np.testing.assert_allclose(sorted(model.centroids[:, 0]), [0, 1, 2], atol=0.05)
    # degenerate segment or wrong dimension falls back
    same = TaskAnchors((1.0, 1.0), (1.0, 1.0))
    assert kmeans(x, 3, SeedMode.TASK_INTERPOLATED, same).seed_mode is SeedMode.PLUS_PLUS
    x3 = np.column_stack([x, x[:, 0]])
    assert kmeans(x3, 3, SeedMode.TASK_INTERPOLATED, anchors).seed_mode is SeedMode.PLUS_PLUS


def test_deterministic_for_fixed_seed():
    x = np.random.default_rng(3).normal(size=(200, 3))
    a, b = kmeans(x, 5, seed=9), kmeans(x, 5, seed=9)
    np.testing.assert_array_equal(a.assignments, b.assignments)
    np.testing.assert_array_equal(a.centroids, b.centroids)


@settings(max_examples=60, deadline=None)
@given(
    n=st.integers(4, 40),
    d=st.integers(1, 4),
    k=st.integers(1, 4),
    seed=st.integers(0, 2**31),
)
def test_inertia_history_nonincreasing(n, d, k, seed):
    x = np.random.default_rng(seed).normal(size=(n, d))
    model = kmeans(x, k, seed=seed)
    h = np.array(model.history)
    assert np.all(np.diff(h) <= 1e-9 * max(1.0, h[0]))
    assert model.iterations <= 100
    assert len(model.assignments) == n
    assert model.sizes().sum() == n


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 12), seed=st.integers(0, 2**31))
def test_k_equal_distinct_count_gives_zero_inertia(n, seed):
    x = np.random.default_rng(seed).normal(size=(n, 2))
    model = kmeans(x, n, seed=seed)
    assert model.inertia == pytest.approx(0.0, abs=1e-12)
