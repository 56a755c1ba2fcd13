import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mvkit.compose import (
    GaussianRandomProjection,
    ProjectionSpec,
    RandomSubspace,
    SubspaceSpec,
    concat_views,
    random_gaussian_projection,
    random_subspace,
    split_features,
    subspace_indices,
)
from mvkit.core import validate_views
from mvkit.exceptions import BadBoundaries, BadSpec


def test_full_subset_is_permutation(rng):
    X = rng.standard_normal((5, 12))
    ds = random_subspace(X, SubspaceSpec(n_views=4, subset_size=12, seed=3))
    for V, names in zip(ds, ds.feature_names):
        cols = [int(c) for c in names]
        assert sorted(cols) == list(range(12))
        np.testing.assert_array_equal(V, X[:, cols])


def test_subspace_deterministic():
    spec = SubspaceSpec(3, 4, seed=11)
    a = subspace_indices(20, spec)
    b = subspace_indices(20, spec)
    assert all(np.array_equal(x, y) for x, y in zip(a, b))


def test_subspace_inclusion_frequency():
    idx = subspace_indices(100, SubspaceSpec(n_views=1000, subset_size=10, seed=0))
    freq = np.bincount(np.concatenate(idx), minlength=100) / 1000
    # the 0.02 band is read as the typical (RMS) deviation; per-column
    # binomial sd is 0.0095, so every column gets a 5-sd bound instead
    assert np.sqrt(np.mean((freq - 0.10) ** 2)) <= 0.02
    assert np.all(np.abs(freq - 0.10) <= 5 * np.sqrt(0.1 * 0.9 / 1000))
    assert freq.sum() == pytest.approx(10.0)


def test_subspace_no_duplicates_within_view():
    for cols in subspace_indices(30, SubspaceSpec(50, 7, seed=2)):
        assert len(set(cols.tolist())) == 7


def test_subspace_bad_size(rng):
    with pytest.raises(BadSpec):
        random_subspace(rng.standard_normal((3, 4)), SubspaceSpec(1, 5))


def test_projection_shapes_and_determinism(rng):
    X = rng.standard_normal((15, 10))
    spec = ProjectionSpec(n_views=3, n_components=4, seed=5)
    a = random_gaussian_projection(X, spec)
    b = random_gaussian_projection(X, spec)
    assert all(V.shape == (15, 4) for V in a)
    assert all(np.array_equal(u, v) for u, v in zip(a, b))


def test_projection_distance_distortion():
    distortions = []
    for seed in range(20):
        r = np.random.default_rng(seed)
        X = r.standard_normal((200, 10))
        (Y,) = random_gaussian_projection(X, ProjectionSpec(1, 64, seed=seed))
        i = r.choice(200, 100)
        j = r.choice(200, 100)
        keep = i != j
        i, j = i[keep], j[keep]
        d0 = ((X[i] - X[j]) ** 2).sum(axis=1)
        d1 = ((Y[i] - Y[j]) ** 2).sum(axis=1)
        distortions.append(np.mean(np.abs(d1 / d0 - 1)))
    assert np.mean(distortions) < 0.3


def test_concat_examples(rng):
    A, B = rng.standard_normal((10, 3)), rng.standard_normal((10, 5))
    assert concat_views([A, B]).shape == (10, 8)
    np.testing.assert_array_equal(concat_views([A]), A)


def test_split_examples(rng):
    X = rng.standard_normal((4, 8))
    assert split_features(X, [3]).n_features == (3, 5)
    (only,) = split_features(X, [])
    np.testing.assert_array_equal(only, X)
    with pytest.raises(BadBoundaries):
        split_features(X, [0])
    with pytest.raises(BadBoundaries):
        split_features(X, [5, 5])
    with pytest.raises(BadBoundaries):
        split_features(X, [8])


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 12).flatmap(lambda d: st.tuples(st.just(d), st.sets(st.integers(1, d - 1)) if d > 1 else st.just(set()))))
def test_split_concat_round_trip(arg):
    d, cuts = arg
    X = np.arange(3 * d, dtype=float).reshape(3, d)
    np.testing.assert_array_equal(concat_views(split_features(X, sorted(cuts))), X)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(1, 9), st.integers(0, 2**32 - 1))
def test_generated_views_validate_jointly(n_views, size, seed):
    X = np.random.default_rng(seed).standard_normal((6, 9))
    ds = random_subspace(X, SubspaceSpec(n_views, size, seed))
    assert validate_views(ds).n_samples == 6
    assert ds == random_subspace(X, SubspaceSpec(n_views, size, seed))


def test_transformer_wrappers(rng):
    X = rng.standard_normal((8, 6))
    rs = RandomSubspace(2, 3, seed=1).fit(X)
    ds = rs.transform(X)
    assert ds.n_features == (3, 3)
    gp = GaussianRandomProjection(2, 4, seed=1)
    ds2 = gp.fit_transform(X)
    np.testing.assert_array_equal(ds2[0], X @ gp.components_[0])
