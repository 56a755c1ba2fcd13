"""Joint and individual variation (AJIVE), group PCA and group ICA."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .core import BaseMultiview, check_widths, fix_signs, make_rng, validate_views
from .exceptions import BadParams, ConvergenceWarning, DegenerateInput, RankError


# -- AJIVE -------------------------------------------------------------------


@dataclass(frozen=True)
class AjiveParams:
    initial_ranks: tuple
    n_resamples: int = 500
    quantile: float = 0.95
    seed: int = 0
    individual_tol: float = 0.05


@dataclass
class AjiveResult:
    joint_rank: int
    common_scores: np.ndarray
    joint: list
    individual: list
    noise: list
    individual_ranks: list
    means: list
    joint_svals_sq: np.ndarray
    wedin_threshold: float
    random_threshold: float
    binding_bound: str
    wedin_samples: list = field(repr=False, default_factory=list)
    random_samples: np.ndarray = field(repr=False, default=None)


def _random_orthonormal(rng, n, r, basis=None):
    """``r`` orthonormal columns in R^n, orthogonal to ``basis`` if given."""
    G = rng.standard_normal((n, r))
    if basis is not None:
        G -= basis @ (basis.T @ G)
    Q, _ = linalg.qr(G, mode="economic")
    return Q


def _wedin_samples(X, U, s, Vt, rank, n_resamples, seed, view):
    """Resampled upper bounds on the sine of the signal-subspace angle.

    Each draw measures how much of ``X`` lies along random directions
    orthogonal to the retained left and right singular subspaces, relative
    to the smallest retained singular value.
    """
    n, d = X.shape
    V = Vt[:rank].T
    Ur = U[:, :rank]
    out = np.empty(n_resamples)
    for b in range(n_resamples):
        rng = make_rng(seed, 1, view, b)
        parts = []
        if n > rank:
            parts.append(linalg.norm(X.T @ _random_orthonormal(rng, n, rank, Ur), 2))
        if d > rank:
            parts.append(linalg.norm(X @ _random_orthonormal(rng, d, rank, V), 2))
        out[b] = min(max(parts, default=0.0) / s[rank - 1], 1.0)
    return out


def _random_direction_samples(n, ranks, n_resamples, seed):
    out = np.empty(n_resamples)
    for b in range(n_resamples):
        rng = make_rng(seed, 2, b)
        M = np.hstack([_random_orthonormal(rng, n, r) for r in ranks])
        out[b] = linalg.svd(M, compute_uv=False)[0] ** 2
    return out


def ajive_fit(ds, params: AjiveParams) -> AjiveResult:
    """Angle-based joint and individual variation decomposition of two views.

    Each centered view is split as ``X_v = J_v + I_v + E_v``. The joint
    rank counts squared singular values of the stacked signal score bases
    that exceed both a Wedin-type perturbation threshold and the
    ``quantile`` of the same statistic for random subspaces. Raising
    ``quantile`` raises both thresholds.
    """
    ds = validate_views(ds, require_k=2, min_samples=2)
    n = ds.n_samples
    ranks = [int(r) for r in params.initial_ranks]
    if len(ranks) != 2:
        raise BadParams("initial_ranks needs one entry per view")
    for v, (r, X) in enumerate(zip(ranks, ds)):
        if not 1 <= r <= min(X.shape):
            raise RankError(f"initial rank {r} invalid for view {v} of shape {X.shape}")
    if not 0 < params.quantile < 1 or params.n_resamples < 1:
        raise BadParams("quantile must be in (0, 1) and n_resamples >= 1")

    means = [X.mean(axis=0) for X in ds]
    Xc = [X - m for X, m in zip(ds, means)]
    svds = []
    for v, X in enumerate(Xc):
        U, s, Vt = linalg.svd(X, full_matrices=False)
        if s[0] <= 0:
            raise DegenerateInput(f"view {v} has zero variance")
        if s[ranks[v] - 1] <= s[0] * 1e-12:
            raise RankError(f"view {v} has numerical rank below {ranks[v]}")
        svds.append((U, s, Vt))

    M = np.hstack([U[:, :r] for (U, _, _), r in zip(svds, ranks)])
    G_all, sv, _ = linalg.svd(M, full_matrices=False)
    sv_sq = sv ** 2

    wedin = [
        _wedin_samples(X, U, s, Vt, r, params.n_resamples, params.seed, v)
        for v, (X, (U, s, Vt), r) in enumerate(zip(Xc, svds, ranks))
    ]
    # lower quantile of the angle bound -> stricter threshold as quantile rises
    q_low = 1.0 - params.quantile
    wedin_thr = len(Xc) - sum(np.quantile(w, q_low) ** 2 for w in wedin)
    rand = _random_direction_samples(n, ranks, params.n_resamples, params.seed)
    rand_thr = float(np.quantile(rand, params.quantile))
    thr = max(wedin_thr, rand_thr)
    joint_rank = int(min(np.sum(sv_sq > thr), min(ranks)))

    (G,) = fix_signs(G_all[:, :joint_rank]) if joint_rank else (G_all[:, :0],)
    joint, indiv, noise, ind_ranks = [], [], [], []
    for X, (U, s, Vt), r in zip(Xc, svds, ranks):
        J = G @ (G.T @ X)
        R = X - J
        initial_energy = float(np.sum(s[:r] ** 2))
        target = initial_energy - float(np.sum(J ** 2))
        Ur, sr, Vr = linalg.svd(R, full_matrices=False)
        k = 0
        if target > 0:
            cum = np.cumsum(sr ** 2)
            k = int(np.searchsorted(cum, (1.0 - params.individual_tol) * target) + 1)
            k = min(k, r, len(sr))
        Iv = (Ur[:, :k] * sr[:k]) @ Vr[:k]
        joint.append(J)
        indiv.append(Iv)
        noise.append(R - Iv)
        ind_ranks.append(k)
    return AjiveResult(
        joint_rank=joint_rank,
        common_scores=G,
        joint=joint,
        individual=indiv,
        noise=noise,
        individual_ranks=ind_ranks,
        means=means,
        joint_svals_sq=sv_sq,
        wedin_threshold=float(wedin_thr),
        random_threshold=rand_thr,
        binding_bound="wedin" if wedin_thr >= rand_thr else "random",
        wedin_samples=wedin,
        random_samples=rand,
    )


class AJIVE(BaseMultiview):
    """Estimator wrapper around :func:`ajive_fit`.

    ``transform`` returns the joint matrices of the training views.
    """

    def __init__(self, init_signal_ranks, n_resamples=500, quantile=0.95, seed=0):
        self.init_signal_ranks = init_signal_ranks
        self.n_resamples = n_resamples
        self.quantile = quantile
        self.seed = seed

    def fit(self, Xs, y=None):
        params = AjiveParams(tuple(self.init_signal_ranks), self.n_resamples, self.quantile, self.seed)
        res = ajive_fit(Xs, params)
        self.result_ = res
        self.joint_rank_ = res.joint_rank
        self.joint_scores_ = res.common_scores
        self.individual_ranks_ = res.individual_ranks
        return self

    def transform(self, Xs=None, y=None):
        self._check_fitted("result_")
        return self.result_.joint


# -- group PCA / ICA -----------------------------------------------------------


def _pca(X, r):
    U, s, Vt = linalg.svd(X, full_matrices=False)
    U, Vt_T = fix_signs(U[:, :r], Vt[:r].T)
    return U * s[:r], Vt_T, s[:r]


@dataclass
class GroupPCAResult:
    scores: np.ndarray
    loadings: list
    means: list
    reductions: list
    group_components: np.ndarray
    singular_values: np.ndarray


def group_pca_fit_transform(ds, individual_ranks=None, n_components=None) -> GroupPCAResult:
    """Two-stage PCA: reduce each centered view, then PCA the concatenation.

    Parameters
    ----------
    individual_ranks : sequence of int, optional
        Per-view reduction ranks; defaults to each view's full rank.
    n_components : int, optional
        Defaults to the sum of individual ranks (capped by ``n_samples``).
    """
    ds = validate_views(ds, min_samples=2)
    n = ds.n_samples
    if individual_ranks is None:
        individual_ranks = [min(X.shape) for X in ds]
    individual_ranks = [int(r) for r in individual_ranks]
    if len(individual_ranks) != ds.n_views:
        raise BadParams("individual_ranks needs one entry per view")
    for v, (r, X) in enumerate(zip(individual_ranks, ds)):
        if not 1 <= r <= min(X.shape):
            raise RankError(f"rank {r} invalid for view {v} of shape {X.shape}")
    means = [X.mean(axis=0) for X in ds]
    Xc = [X - m for X, m in zip(ds, means)]
    reduced, reductions = [], []
    for X, r in zip(Xc, individual_ranks):
        T, V, _ = _pca(X, r)
        reduced.append(T)
        reductions.append(V)
    Z = np.hstack(reduced)
    max_comp = min(Z.shape)
    if n_components is None:
        n_components = max_comp
    if not 1 <= n_components <= max_comp:
        raise RankError(f"n_components={n_components} must be in [1, {max_comp}]")
    scores, comps, s = _pca(Z, n_components)
    loadings = [linalg.lstsq(scores, X)[0] for X in Xc]
    return GroupPCAResult(scores, loadings, means, reductions, comps, s)


class GroupPCA(BaseMultiview):
    def __init__(self, n_components=None, individual_ranks=None):
        self.n_components = n_components
        self.individual_ranks = individual_ranks

    def fit(self, Xs, y=None):
        res = group_pca_fit_transform(Xs, self.individual_ranks, self.n_components)
        self.result_ = res
        self.means_ = res.means
        self.reductions_ = res.reductions
        self.components_ = res.group_components
        self.loadings_ = res.loadings
        self.n_features_in_ = tuple(len(m) for m in res.means)
        return self

    def transform(self, Xs, y=None):
        self._check_fitted("components_")
        ds = validate_views(Xs)
        check_widths(ds, self.n_features_in_)
        Z = np.hstack([(X - m) @ V for X, m, V in zip(ds, self.means_, self.reductions_)])
        return Z @ self.components_


@dataclass
class IcaResult:
    unmixing: np.ndarray
    sources: np.ndarray
    mixing: list
    converged: bool
    n_iter: int
    rotation: np.ndarray
    means: list


def _sym_decorrelate(W):
    s, u = linalg.eigh(W @ W.T)
    s = np.maximum(s, np.finfo(float).tiny)
    return (u / np.sqrt(s)) @ u.T @ W


def fastica(Z, seed=0, tol=1e-4, max_iter=200):
    """Symmetric FastICA with the tanh contrast on whitened rows ``Z``.

    Parameters
    ----------
    Z : ndarray, (n_components, n_samples)
        Whitened data.

    Returns
    -------
    W, converged, n_iter
    """
    m, n = Z.shape
    rng = make_rng(seed, 3)
    W = _sym_decorrelate(rng.standard_normal((m, m)))
    converged = False
    for it in range(1, max_iter + 1):
        G = np.tanh(W @ Z)
        g_prime = 1.0 - G ** 2
        W_new = _sym_decorrelate(G @ Z.T / n - g_prime.mean(axis=1)[:, None] * W)
        change = np.max(np.abs(np.abs(np.einsum("ij,ij->i", W_new, W)) - 1.0))
        W = W_new
        if change < tol:
            converged = True
            break
    return W, converged, it


def group_ica_fit(ds, individual_ranks=None, n_components=None, tol=1e-4, max_iter=200, seed=0) -> IcaResult:
    """Group ICA: group PCA, whitening, then symmetric FastICA.

    ``unmixing`` maps the column-concatenation of the centered views to the
    sources, which have unit sample variance (``n - 1`` denominator).
    Non-convergence is flagged and warned about, not raised.
    """
    ds = validate_views(ds, min_samples=3)
    pca = group_pca_fit_transform(ds, individual_ranks, n_components)
    n = ds.n_samples
    T = pca.scores
    sd = T.std(axis=0, ddof=1)
    if np.any(sd <= 0):
        raise RankError("group PCA produced a degenerate component")
    Z = (T / sd).T
    W, converged, n_iter = fastica(Z, seed=seed, tol=tol, max_iter=max_iter)
    if not converged:
        warnings.warn(
            f"FastICA did not converge in {max_iter} iterations", ConvergenceWarning
        )
    S = (W @ Z).T
    # linear map from concatenated centered views to sources
    block = linalg.block_diag(*pca.reductions)
    unmixing = (block @ pca.group_components @ np.diag(1.0 / sd) @ W.T).T
    Xc = [X - m for X, m in zip(ds, pca.means)]
    mixing = [linalg.lstsq(S, X)[0] for X in Xc]
    return IcaResult(unmixing, S, mixing, converged, n_iter, W, pca.means)


class GroupICA(BaseMultiview):
    def __init__(self, n_components=None, individual_ranks=None, tol=1e-4, max_iter=200, seed=0):
        self.n_components = n_components
        self.individual_ranks = individual_ranks
        self.tol = tol
        self.max_iter = max_iter
        self.seed = seed

    def fit(self, Xs, y=None):
        res = group_ica_fit(Xs, self.individual_ranks, self.n_components, self.tol, self.max_iter, self.seed)
        self.result_ = res
        self.unmixing_ = res.unmixing
        self.mixing_ = res.mixing
        self.converged_ = res.converged
        self.n_features_in_ = tuple(len(m) for m in res.means)
        return self

    def transform(self, Xs, y=None):
        self._check_fitted("unmixing_")
        ds = validate_views(Xs)
        check_widths(ds, self.n_features_in_)
        Xc = np.hstack([X - m for X, m in zip(ds, self.result_.means)])
        return Xc @ self.unmixing_.T


def amari_distance(W, A):
    """Amari distance of ``W @ A`` from a scaled permutation, in [0, 1]."""
    P = np.abs(np.asarray(W) @ np.asarray(A))
    m = P.shape[0]
    rows = (P.sum(axis=1) / P.max(axis=1) - 1.0).sum()
    cols = (P.sum(axis=0) / P.max(axis=0) - 1.0).sum()
    return float((rows + cols) / (2.0 * m * (m - 1)))
