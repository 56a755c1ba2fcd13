import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import linalg

from mvkit.datasets import SyntheticSpec, make_latent_views
from mvkit.embed import (
    CCA,
    GCCA,
    KMCCA,
    MCCA,
    MVMDS,
    Omnibus,
    cca_fit,
    cca_transform,
    center_gram,
    classical_mds,
    gcca_fit,
    kernel_matrix,
    kmcca_fit,
    mcca_fit,
    mvmds_fit_transform,
    omnibus_fit_transform,
    omnibus_matrix,
)
from mvkit.exceptions import KernelError, NotFitted, NumericalFailure, RankError, ShapeMismatch

from conftest import principal_angles


def dense_cca_oracle(X1, X2):
    """Canonical correlations from the symmetric-definite pencil."""
    X1 = X1 - X1.mean(axis=0)
    X2 = X2 - X2.mean(axis=0)
    d1, d2 = X1.shape[1], X2.shape[1]
    C = np.hstack([X1, X2]).T @ np.hstack([X1, X2])
    A = np.zeros_like(C)
    A[:d1, d1:] = C[:d1, d1:]
    A[d1:, :d1] = C[d1:, :d1]
    B = np.zeros_like(C)
    B[:d1, :d1] = C[:d1, :d1]
    B[d1:, d1:] = C[d1:, d1:]
    vals = linalg.eigh(A, B, eigvals_only=True)
    return np.sort(vals)[::-1][: min(d1, d2)]


def correlated_pair(seed, n=300, d1=5, d2=4):
    r = np.random.default_rng(seed)
    z = r.standard_normal((n, 3))
    X1 = z @ r.standard_normal((3, d1)) + 0.7 * r.standard_normal((n, d1))
    X2 = z @ r.standard_normal((3, d2)) + 0.7 * r.standard_normal((n, d2))
    return X1, X2


# -- CCA ------------------------------------------------------------------


def test_cca_identical_views(rng):
    X = rng.standard_normal((50, 3))
    m = cca_fit([X, X], n_components=3)
    np.testing.assert_allclose(m.canon_corrs_, 1.0, atol=1e-8)


def test_cca_invertible_map(rng):
    X = rng.standard_normal((50, 3))
    M = rng.standard_normal((3, 3)) + 3 * np.eye(3)
    m = cca_fit([X, X @ M], n_components=3)
    np.testing.assert_allclose(m.canon_corrs_, 1.0, atol=1e-8)


def test_cca_independent_views_small():
    r = np.random.default_rng(0)
    m = cca_fit([r.standard_normal((2000, 5)), r.standard_normal((2000, 5))], n_components=5)
    assert np.all(m.canon_corrs_ < 0.15)


@pytest.mark.parametrize("seed", range(5))
def test_cca_matches_dense_oracle(seed):
    X1, X2 = correlated_pair(seed)
    m = cca_fit([X1, X2], n_components=4)
    np.testing.assert_allclose(m.canon_corrs_, dense_cca_oracle(X1, X2), atol=1e-10)


def test_cca_transform_reproducible_and_correlations(rng):
    X1, X2 = correlated_pair(3)
    m = cca_fit([X1, X2], n_components=3)
    S1, S2 = cca_transform(m, [X1, X2])
    T1, T2 = cca_transform(m, [X1, X2])
    np.testing.assert_array_equal(S1, T1)
    np.testing.assert_array_equal(S2, T2)
    for j in range(3):
        assert abs(np.corrcoef(S1[:, j], S2[:, j])[0, 1] - m.canon_corrs_[j]) < 1e-6
    np.testing.assert_allclose(S1.std(axis=0, ddof=1), 1.0, atol=1e-6)
    np.testing.assert_allclose(S2.std(axis=0, ddof=1), 1.0, atol=1e-6)


def test_cca_width_mismatch(rng):
    X1, X2 = correlated_pair(1)
    m = cca_fit([X1, X2])
    with pytest.raises(ShapeMismatch):
        m.transform([X1[:, :-1], X2])


def test_cca_errors(rng):
    with pytest.raises(NotFitted):
        CCA().transform([rng.standard_normal((5, 2))] * 2)
    with pytest.raises(RankError):
        CCA(n_components=4).fit([rng.standard_normal((20, 3)), rng.standard_normal((20, 5))])
    X = rng.standard_normal((20, 3))
    with pytest.raises(NumericalFailure):
        CCA().fit([np.column_stack([X, X[:, 0]]), X])


def test_cca_regularization_shrinks(rng):
    X1, X2 = correlated_pair(2)
    r0 = cca_fit([X1, X2], 2).canon_corrs_
    r1 = cca_fit([X1, X2], 2, regularization=10.0).canon_corrs_
    assert np.all(r1 <= r0 + 1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_cca_invariance_property(seed):
    r = np.random.default_rng(seed)
    X1, X2 = correlated_pair(seed, n=120, d1=3, d2=3)
    M = r.standard_normal((3, 3))
    if abs(np.linalg.det(M)) < 0.1:
        M += 2 * np.eye(3)
    a = cca_fit([X1, X2], 3).canon_corrs_
    b = cca_fit([X1, X2 @ M], 3).canon_corrs_
    np.testing.assert_allclose(a, b, atol=1e-6)
    assert np.all(np.diff(a) <= 1e-12)
    assert np.all((a >= 0) & (a <= 1))


# -- MCCA -----------------------------------------------------------------


@pytest.mark.parametrize("seed", range(4))
def test_mcca_two_views_matches_cca(seed):
    X1, X2 = correlated_pair(seed)
    a = cca_fit([X1, X2], 3)
    b = mcca_fit([X1, X2], 3)
    assert abs(a.canon_corrs_[0] - b.canon_corrs_[0]) < 1e-6
    np.testing.assert_allclose(a.canon_corrs_, b.canon_corrs_, atol=1e-6)


def test_mcca_three_copies(rng):
    X = rng.standard_normal((80, 4))
    m = MCCA(2).fit([X, X, X])
    S = m.transform([X, X, X])
    for Sv in S[1:]:
        np.testing.assert_allclose(Sv[:, 0], S[0][:, 0], atol=1e-6)


def test_mcca_recovers_latent():
    r = np.random.default_rng(0)
    z = r.standard_normal(200)
    Xs = [np.outer(z, r.standard_normal(5)) + 0.1 * r.standard_normal((200, 5)) for _ in range(4)]
    S = MCCA(1).fit(Xs).transform(Xs)
    for Sv in S:
        assert abs(np.corrcoef(Sv[:, 0], z)[0, 1]) >= 0.9


def test_mcca_on_generator_views():
    ds, z, _ = make_latent_views(SyntheticSpec(300, 1, (5, 6, 7, 8), noise_sigma=0.1, seed=4))
    S = MCCA(1).fit(ds).transform(ds)
    for Sv in S:
        assert abs(np.corrcoef(Sv[:, 0], z[:, 0])[0, 1]) >= 0.9


def test_mcca_correlations_sorted(rng):
    Xs = [correlated_pair(s)[0] for s in range(3)]
    m = MCCA(3, regularization=0.1).fit(Xs)
    assert np.all(np.diff(m.canon_corrs_) <= 1e-12)
    assert m.converged_


def test_mcca_transform_twice_identical(rng):
    Xs = list(correlated_pair(0))
    m = MCCA(2).fit(Xs)
    a, b = m.transform(Xs), m.transform(Xs)
    assert all(np.array_equal(u, v) for u, v in zip(a, b))


# -- kernel MCCA ----------------------------------------------------------


@pytest.mark.parametrize("seed", range(3))
def test_kmcca_linear_matches_mcca(seed):
    X1, X2 = correlated_pair(seed, n=150)
    a = mcca_fit([X1, X2], 3)
    b = kmcca_fit([X1, X2], 3, kernel="linear", regularization=1e-6)
    np.testing.assert_allclose(b.canon_corrs_, a.canon_corrs_, atol=1e-5)


def test_kmcca_rbf_identical_views(rng):
    X = rng.standard_normal((60, 3))
    m = kmcca_fit([X, X], 2, kernel="rbf", regularization=0.1, gamma=0.5)
    assert abs(m.canon_corrs_[0] - 1.0) < 1e-6


def test_centered_gram_row_sums(rng):
    X = rng.standard_normal((30, 4))
    for kind in ("linear", "rbf", "polynomial"):
        Kc = center_gram(kernel_matrix(X, X, kind, gamma=0.3))
        assert np.max(np.abs(Kc.sum(axis=1))) < 1e-8


def test_kmcca_out_of_sample_matches_training(rng):
    X1, X2 = correlated_pair(5, n=100)
    m = KMCCA(2, kernel="rbf", regularization=0.1, gamma=0.2).fit([X1, X2])
    a = m.transform([X1, X2])
    b = m.transform([X1, X2])
    assert all(np.array_equal(u, v) for u, v in zip(a, b))
    assert np.all(np.diff(m.canon_corrs_) <= 1e-12)


def test_kmcca_kernel_errors(rng):
    X = rng.standard_normal((10, 2))
    with pytest.raises(KernelError):
        KMCCA(kernel="sigmoid").fit([X, X])
    with pytest.raises(KernelError):
        KMCCA(kernel="rbf", gamma=-1.0).fit([X, X])


# -- GCCA -----------------------------------------------------------------


@pytest.mark.parametrize("seed", range(3))
def test_gcca_two_views_matches_cca_subspace(seed):
    X1, X2 = correlated_pair(seed, d1=5, d2=4)
    r = 3
    g = gcca_fit([X1, X2], r, ranks=[5, 4])
    S1, S2 = cca_fit([X1, X2], r).transform([X1, X2])
    assert np.max(principal_angles(g.joint_, S1 + S2)) < 1e-6


def test_gcca_identical_views(rng):
    X = rng.standard_normal((40, 6))
    # per-view rank r; with full ranks all stacked singular values tie
    g = gcca_fit([X, X, X], 3, ranks=[3, 3, 3])
    U = linalg.svd(X - X.mean(axis=0), full_matrices=False)[0][:, :3]
    assert np.max(principal_angles(g.joint_, U)) < 1e-8
    np.testing.assert_allclose(g.joint_.T @ g.joint_, np.eye(3), atol=1e-8)


def test_gcca_parallel_bit_identical():
    Xs = [correlated_pair(s, d1=6)[0] for s in range(4)]
    a = GCCA(2, n_jobs=1).fit(Xs).joint_
    b = GCCA(2, n_jobs=4).fit(Xs).joint_
    np.testing.assert_array_equal(a, b)


def test_gcca_transform_shapes(rng):
    Xs = [rng.standard_normal((30, d)) for d in (3, 5, 4)]
    g = GCCA(2).fit(Xs)
    out = g.transform(Xs)
    assert all(o.shape == (30, 2) for o in out)
    assert np.all(np.diff(g.singular_values_) <= 1e-12)


# -- MVMDS ----------------------------------------------------------------


def test_mvmds_equal_views_match_classical(rng):
    X = rng.standard_normal((25, 4))
    Q, _ = mvmds_fit_transform([X, X], 2)
    U, _ = classical_mds(X, 2)
    assert np.max(principal_angles(Q, U)) < 1e-8
    np.testing.assert_allclose(Q.T @ Q, np.eye(2), atol=1e-8)


def test_mvmds_rotated_views(rng):
    X = rng.standard_normal((30, 3)) * [4.0, 2.0, 0.5]
    R, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    Q, evals = mvmds_fit_transform([X, X @ R], 2)
    U, _ = classical_mds(X, 2)
    assert np.max(principal_angles(Q, U)) < 1e-8
    assert np.all(np.diff(evals) <= 1e-9)


def test_mvmds_small_n_rejected():
    with pytest.raises(RankError):
        MVMDS(1).fit_transform([np.eye(2), np.eye(2)])


# -- omnibus --------------------------------------------------------------


def test_omnibus_identical_blocks(rng):
    X = rng.standard_normal((15, 3))
    res = omnibus_fit_transform([X, X, X], 3)
    for Z in res.embeddings[1:]:
        np.testing.assert_allclose(Z, res.embeddings[0], atol=1e-8)


def test_omnibus_symmetric(rng):
    Xs = [rng.standard_normal((10, d)) for d in (2, 5)]
    M = omnibus_matrix(Xs)
    assert np.max(np.abs(M - M.T)) == 0


def test_omnibus_hand_sized_oracle():
    X1 = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 2.0], [3.0, 1.0]])
    X2 = np.array([[0.5], [1.5], [-1.0], [2.5]])
    d = 3
    res = omnibus_fit_transform([X1, X2], d)
    # independent 8x8 omnibus construction
    D = [np.sqrt(((X[:, None] - X[None]) ** 2).sum(-1)) for X in (X1, X2)]
    M = np.block([[D[0], (D[0] + D[1]) / 2], [(D[0] + D[1]) / 2, D[1]]])
    np.testing.assert_array_equal(res.omnibus, M)
    lam, V = np.linalg.eigh(M)
    keep = np.argsort(-np.abs(lam))[:d]
    best = V[:, keep] @ np.diag(lam[keep]) @ V[:, keep].T
    best_err = np.linalg.norm(M - best)
    Z = np.vstack(res.embeddings)
    approx = Z @ np.diag(np.sign(res.eigenvalues)) @ Z.T
    assert np.linalg.norm(M - approx) <= best_err + 1e-8
    np.testing.assert_allclose(np.sort(np.abs(res.eigenvalues)), np.sort(np.abs(lam[keep])), atol=1e-10)


def test_omnibus_estimator_shapes(rng):
    Xs = [rng.standard_normal((12, d)) for d in (2, 3)]
    out = Omnibus(2).fit_transform(Xs)
    assert [Z.shape for Z in out] == [(12, 2), (12, 2)]


def test_embed_deterministic(rng):
    Xs = [rng.standard_normal((20, 3)), rng.standard_normal((20, 4))]
    for make in (lambda: MCCA(2), lambda: KMCCA(2, kernel="rbf", gamma=0.5), lambda: GCCA(2)):
        a = make().fit(Xs).transform(Xs)
        b = make().fit(Xs).transform(Xs)
        assert all(np.array_equal(u, v) for u, v in zip(a, b))
