import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dtwsse.core import ClassQuota, Dataset
from dtwsse.dtw import dtw_distance
from dtwsse.exceptions import InsufficientNeighborsError
from dtwsse.neighbors import (
    ClassDistanceCache,
    distances_to,
    effective_k,
    k_nearest_within_class,
    select_centers,
)


@pytest.fixture
def three_series():
    X = np.array([[0, 0], [0, 1], [5, 5]], dtype=float)[:, :, None]
    return Dataset(X, ["a", "a", "a"])


class TestSelectCenters:
    def test_zero(self, warped_small):
        q = ClassQuota("1", 5, 0, 0)
        assert select_centers(warped_small, q, np.random.default_rng(0)).size == 0

    def test_exhaustive_draw_is_permutation(self, warped_small):
        idx = warped_small.class_indices("1")
        q = ClassQuota("1", len(idx), len(idx), len(idx))
        centers = select_centers(warped_small, q, np.random.default_rng(0))
        assert sorted(centers.tolist()) == idx.tolist()

    def test_with_replacement_beyond_class_size(self):
        X = np.arange(20.0).reshape(20, 1, 1)
        ds = Dataset(X, ["a"] * 10 + ["b"] * 10)
        centers = select_centers(ds, ClassQuota("b", 10, 90, 90), np.random.default_rng(4))
        assert len(centers) == 90
        assert set(centers.tolist()) <= set(range(10, 20))
        assert len(set(centers.tolist())) < 90

    def test_deterministic(self, warped_small):
        q = ClassQuota("2", 5, 12, 12)
        a = select_centers(warped_small, q, np.random.default_rng(9))
        b = select_centers(warped_small, q, np.random.default_rng(9))
        np.testing.assert_array_equal(a, b)

    def test_absent_class(self, warped_small):
        with pytest.raises(KeyError):
            select_centers(warped_small, ClassQuota("x", 1, 1, 1), np.random.default_rng(0))


class TestKNearest:
    def test_forced_single_other(self):
        ds = Dataset(np.array([[0.0, 1.0], [3.0, 3.0], [9.0, 9.0]]), ["a", "a", "b"])
        assert k_nearest_within_class(ds, 0, 1).neighbors == (1,)

    def test_dtw_by_hand(self, three_series):
        nb = k_nearest_within_class(three_series, 0, 1, "dtw")
        assert nb.neighbors == (1,)
        assert nb.distances == (1.0,)
        assert dtw_distance([0, 0], [5, 5]) == 50.0

    def test_ties_break_by_index(self):
        X = np.array([[0.0], [1.0], [1.0], [-1.0]])[:, :, None]
        ds = Dataset(X, ["a"] * 4)
        assert k_nearest_within_class(ds, 0, 2, "euclidean-flat").neighbors == (1, 2)
        assert k_nearest_within_class(ds, 0, 3, "dtw").neighbors == (1, 2, 3)

    def test_insufficient_members(self, three_series):
        with pytest.raises(InsufficientNeighborsError):
            k_nearest_within_class(three_series, 0, 3)

    def test_metric_changes_choice_on_warped_data(self):
        # DTW: 0 vs 0.25; flat Euclidean: 1 vs 0.5
        X = np.array([[0, 0, 1], [0, 1, 1], [0, 0, 1.5]], dtype=float)[:, :, None]
        ds = Dataset(X, ["a"] * 3)
        assert k_nearest_within_class(ds, 0, 1, "dtw").neighbors == (1,)
        assert k_nearest_within_class(ds, 0, 1, "euclidean-flat").neighbors == (2,)

    def test_unknown_metric(self, three_series):
        with pytest.raises(ValueError):
            k_nearest_within_class(three_series, 0, 1, "cosine")

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.sampled_from(["dtw", "euclidean-flat"]))
    def test_properties(self, seed, k, metric):
        rng = np.random.default_rng(seed)
        X = rng.normal(size=(12, 5, 1))
        y = rng.choice(["a", "b"], size=12).tolist()
        y[:6] = ["a"] * 6
        ds = Dataset(X, y)
        center = int(rng.integers(0, 6))
        nb = k_nearest_within_class(ds, center, k, metric)
        same = [i for i in range(12) if y[i] == "a" and i != center]
        assert len(set(nb.neighbors)) == k and center not in nb.neighbors
        assert all(y[i] == "a" for i in nb.neighbors)
        d = distances_to(X[center], X[same], metric)
        assert max(nb.distances) <= min(
            dist for i, dist in zip(same, d) if i not in nb.neighbors
        ) if len(same) > k else True
        assert nb == k_nearest_within_class(ds, center, k, metric)


def test_cache_memoises_rows(warped_small):
    cache = ClassDistanceCache(warped_small, "1")
    row = cache.row(int(warped_small.class_indices("1")[0]))
    assert cache.row(int(warped_small.class_indices("1")[0])) is row


def test_effective_k_warns_when_clamped():
    with pytest.warns(RuntimeWarning):
        assert effective_k(3, 5) == 2
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert effective_k(6, 5) == 5
