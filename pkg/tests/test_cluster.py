import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mvkit.cluster import (
    AffinityParams,
    ClusterParams,
    CoRegMultiviewSpectralClustering,
    MultiviewKMeans,
    MultiviewSpectralClustering,
    MultiviewSphericalKMeans,
    affinity_matrix,
    coreg_spectral_fit_predict,
    kmeans,
    mv_kmeans_fit_predict,
    mv_spectral_fit_predict,
    mv_spherical_kmeans_fit_predict,
)
from mvkit.core import adjusted_rand_index as ari
from mvkit.datasets import SyntheticSpec, make_latent_views, simplex_centers
from mvkit.exceptions import BadParams, ViewCountError, ZeroRow

from conftest import njw_spectral_oracle


def blobs(seed, sep=8.0, noise=0.5, n=150):
    ds, _, y = make_latent_views(SyntheticSpec(n, 2, (10, 8), noise, 3, sep, seed))
    return ds, y


def sphere_blobs(seed, n=150, d=5, noise=0.25):
    """Three mutually orthogonal directions per view (90 degrees apart)."""
    r = np.random.default_rng(seed)
    y = np.repeat(np.arange(3), n // 3)
    views = []
    for _ in range(2):
        Q, _ = np.linalg.qr(r.standard_normal((d, 3)))
        M = Q.T[y] + noise * r.standard_normal((n, d))
        views.append(M / np.linalg.norm(M, axis=1, keepdims=True))
    return views, y


def circles(seed, n=200, sep=2.0):
    """Concentric circles in view 1; the same labels split linearly in view 2."""
    r = np.random.default_rng(seed)
    y = r.integers(2, size=n)
    t = r.uniform(0, 2 * np.pi, n)
    rad = np.where(y == 0, 1.0, 3.0)
    X1 = np.c_[rad * np.cos(t), rad * np.sin(t)] + 0.1 * r.standard_normal((n, 2))
    X2 = np.c_[(2 * y - 1) * sep, np.zeros(n)] + r.standard_normal((n, 2))
    return [X1, X2], y


def noisy_blob_views(seed, n=150, sep=3.4, sigma=1.0):
    """Two conditionally independent noisy copies of three 2-D blobs."""
    r = np.random.default_rng(seed)
    y = np.repeat(np.arange(3), n // 3)
    C = simplex_centers(3, 2, sep)
    return [C[y] + sigma * r.standard_normal((n, 2)) for _ in range(2)], y


# -- k-means variants -------------------------------------------------------


def test_single_cluster_all_zero(rng):
    Xs = [rng.standard_normal((20, 3)), rng.standard_normal((20, 2))]
    assert np.all(mv_kmeans_fit_predict(Xs, ClusterParams(1)).labels == 0)
    assert np.all(mv_spherical_kmeans_fit_predict(Xs, ClusterParams(1)).labels == 0)


def test_identical_views_match_kmeans_oracle():
    from sklearn.cluster import KMeans

    ds, _ = blobs(0, sep=10.0, noise=1.0)
    X = ds[0]
    labels = MultiviewKMeans(3, seed=0).fit_predict([X, X])
    oracle = KMeans(3, n_init=10, random_state=0).fit_predict(X)
    assert ari(labels, oracle) == 1.0


def test_own_kmeans_matches_sklearn_on_blobs():
    from sklearn.cluster import KMeans

    ds, y = blobs(1)
    labels, _, _ = kmeans(ds[0], 3, seed=0)
    assert ari(labels, KMeans(3, n_init=10, random_state=0).fit_predict(ds[0])) == 1.0


def test_mv_kmeans_blobs_median():
    scores = [ari(y, MultiviewKMeans(3, seed=s).fit_predict(ds)) for s in range(10) for ds, y in [blobs(s)]]
    assert np.median(scores) >= 0.95


def test_best_restart_selected():
    ds, _ = blobs(2, sep=3.0, noise=1.0)
    m = MultiviewKMeans(3, n_init=6, seed=3).fit(ds)
    assert m.objective_ <= min(m.restart_objectives_) + 1e-12
    assert len(m.restart_objectives_) == 6


def test_mv_kmeans_requires_two_views(rng):
    X = rng.standard_normal((10, 2))
    with pytest.raises(ViewCountError):
        MultiviewKMeans(2).fit([X, X, X])
    with pytest.raises(BadParams):
        MultiviewKMeans(11).fit([X, X])


def test_mv_kmeans_predict_training(rng):
    ds, _ = blobs(4)
    m = MultiviewKMeans(3, seed=1).fit(ds)
    np.testing.assert_array_equal(m.predict(ds), m.labels_)


def test_spherical_scale_invariance():
    views, _ = sphere_blobs(0)
    r = np.random.default_rng(1)
    scaled = [V * r.uniform(0.1, 10.0, size=(len(V), 1)) for V in views]
    a = MultiviewSphericalKMeans(3, seed=0).fit_predict(views)
    b = MultiviewSphericalKMeans(3, seed=0).fit_predict(scaled)
    np.testing.assert_array_equal(a, b)


def test_spherical_blobs_median():
    scores = []
    for s in range(10):
        views, y = sphere_blobs(s)
        scores.append(ari(y, MultiviewSphericalKMeans(3, seed=s).fit_predict(views)))
    assert np.median(scores) >= 0.95


def test_spherical_zero_row(rng):
    X = rng.standard_normal((10, 3))
    X[4] = 0.0
    with pytest.raises(ZeroRow):
        MultiviewSphericalKMeans(2).fit([X, rng.standard_normal((10, 3))])


# -- spectral methods ---------------------------------------------------------


def test_affinity_symmetric_nonnegative(rng):
    X = rng.standard_normal((30, 4))
    for params in (AffinityParams(), AffinityParams(kind="knn", n_neighbors=5)):
        W = affinity_matrix(X, params)
        assert np.all(W >= 0)
        assert np.max(np.abs(W - W.T)) <= 1e-12


def test_mv_spectral_info_iter_zero_matches_oracle():
    for s in range(3):
        ds, _ = blobs(s)
        X = ds[0]
        res = mv_spectral_fit_predict([X, X], ClusterParams(3, seed=s), AffinityParams(info_iter=0))
        assert ari(res.labels, njw_spectral_oracle(X, 3, seed=s)) == 1.0


def test_mv_spectral_circles():
    scores = []
    for s in range(10):
        Xs, y = circles(s)
        m = MultiviewSpectralClustering(2, affinity="knn", n_neighbors=10, seed=s)
        scores.append(ari(y, m.fit_predict(Xs)))
    assert np.median(scores) >= 0.9


def test_mv_spectral_three_views(rng):
    ds, y = blobs(5)
    labels = MultiviewSpectralClustering(3, seed=0).fit_predict([ds[0], ds[1], ds[0]])
    assert ari(y, labels) >= 0.95


def test_coreg_lambda_zero_matches_single_view():
    for s in range(3):
        ds, _ = blobs(s)
        res = coreg_spectral_fit_predict(ds, ClusterParams(3, seed=s), AffinityParams(coupling=0.0))
        assert ari(res.labels, njw_spectral_oracle(ds[0], 3, seed=s)) == 1.0


@pytest.mark.parametrize("seed", range(5))
def test_coreg_objective_monotone(seed):
    Xs, _ = noisy_blob_views(seed)
    m = CoRegMultiviewSpectralClustering(3, coupling=0.5, seed=seed).fit(Xs)
    t = np.asarray(m.objective_trace_)
    assert len(t) > 1
    assert np.all(np.diff(t) >= -1e-12 * np.abs(t[:-1]).max())


def test_coreg_combines_noisy_views():
    combined, single0, single1 = [], [], []
    for s in range(10):
        Xs, y = noisy_blob_views(s)
        combined.append(ari(y, CoRegMultiviewSpectralClustering(3, coupling=0.5, seed=s).fit_predict(Xs)))
        single0.append(ari(y, CoRegMultiviewSpectralClustering(3, coupling=0.0, seed=s).fit_predict(Xs)))
        single1.append(ari(y, CoRegMultiviewSpectralClustering(3, coupling=0.0, seed=s).fit_predict(Xs[::-1])))
    assert np.median(single0) <= 0.8
    assert np.median(single1) <= 0.8
    assert np.median(combined) >= 0.9


def test_coreg_negative_coupling(rng):
    X = rng.standard_normal((10, 2))
    with pytest.raises(BadParams):
        CoRegMultiviewSpectralClustering(2, coupling=-1).fit([X, X])


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 1000), st.integers(1, 4))
def test_labels_in_range_and_reproducible(seed, k):
    r = np.random.default_rng(seed)
    Xs = [r.standard_normal((25, 3)) + 0.1, r.standard_normal((25, 2)) + 0.1]
    for make in (
        lambda: MultiviewKMeans(k, seed=seed),
        lambda: MultiviewSphericalKMeans(k, seed=seed),
        lambda: MultiviewSpectralClustering(k, info_iter=2, seed=seed),
        lambda: CoRegMultiviewSpectralClustering(k, max_iter=5, seed=seed),
    ):
        a = make().fit_predict(Xs)
        assert a.min() >= 0 and a.max() < k
        np.testing.assert_array_equal(a, make().fit_predict(Xs))
