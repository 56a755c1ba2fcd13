"""Multiview CCA (sum of correlations) and its kernel counterpart."""

import warnings

import numpy as np
from scipy import linalg

from .._linalg import inv_sqrt_psd, top_eigh
from ..core import BaseMultiview, check_widths, fix_signs, validate_views
from ..exceptions import BadParams, ConvergenceWarning, KernelError, RankError


def _per_view(value, k, name):
    vals = np.broadcast_to(np.asarray(value, dtype=float), (k,)).copy()
    if np.any(vals < 0):
        raise BadParams(f"{name} must be >= 0")
    return vals


def _mean_pairwise_corr(scores):
    """Average Pearson correlation over view pairs, per score column."""
    k = len(scores)
    r = scores[0].shape[1]
    out = np.zeros(r)
    for j in range(r):
        cols = np.column_stack([S[:, j] for S in scores])
        sd = cols.std(axis=0)
        if np.any(sd == 0):
            continue
        C = np.corrcoef(cols, rowvar=False)
        out[j] = C[np.triu_indices(k, 1)].mean()
    return out


class MCCA(BaseMultiview):
    r"""Multiview CCA maximizing the sum of pairwise canonical correlations.

    Each component is found by Horst's alternating scheme, where view
    ``v`` is updated as
    :math:`w_v \propto (\Sigma_{vv} + \lambda_v I)^{-1} \sum_{u \ne v} \Sigma_{vu} w_u`
    and rescaled to :math:`w_v^T (\Sigma_{vv} + \lambda_v I) w_v = 1`.
    The iteration starts from the leading solution of the whitened block
    eigenproblem. After each component every view is deflated against its
    own scores; weights are reported in the original coordinates.

    Parameters
    ----------
    n_components : int, default=1
    regularization : float or sequence of float, default=0
        Ridge added to each within-view covariance.
    tol : float, default=1e-6
        Stop when the largest change in any weight entry is below ``tol``.
    max_iter : int, default=500

    Attributes
    ----------
    weights_ : list of ndarray, (n_features_v, n_components)
    canon_corrs_ : ndarray
        Mean pairwise correlation of the training scores, per component.
    converged_ : bool
    n_iter_ : list of int
    """

    def __init__(self, n_components=1, regularization=0.0, tol=1e-6, max_iter=500):
        self.n_components = n_components
        self.regularization = regularization
        self.tol = tol
        self.max_iter = max_iter

    def fit(self, Xs, y=None):
        ds = validate_views(Xs, min_k=2, min_samples=2)
        k, n = ds.n_views, ds.n_samples
        r = self.n_components
        if not 1 <= r <= min(min(ds.n_features), n - 1):
            raise RankError(
                f"n_components={r} must be in [1, {min(min(ds.n_features), n - 1)}]"
            )
        lam = _per_view(self.regularization, k, "regularization")
        self.means_ = [X.mean(axis=0) for X in ds]
        D = [X - m for X, m in zip(ds, self.means_)]
        B = [np.eye(X.shape[1]) for X in D]
        weights = [np.zeros((X.shape[1], r)) for X in D]
        self.n_iter_ = []
        self.converged_ = True

        for j in range(r):
            C = [[Dv.T @ Du / (n - 1) for Du in D] for Dv in D]
            R = [C[v][v] + lam[v] * np.eye(D[v].shape[1]) for v in range(k)]
            S = [inv_sqrt_psd(C[v][v], lam[v], pseudo=True) for v in range(k)]
            Rinv = [Sv @ Sv for Sv in S]
            w = self._init_weights(C, S, R)
            for it in range(1, self.max_iter + 1):
                change = 0.0
                for v in range(k):
                    z = sum(C[v][u] @ w[u] for u in range(k) if u != v)
                    new = _normalize(Rinv[v] @ z, R[v])
                    change = max(change, np.abs(new - w[v]).max())
                    w[v] = new
                if change < self.tol:
                    break
            else:
                self.converged_ = False
                warnings.warn(
                    f"MCCA component {j} did not converge in {self.max_iter} "
                    f"iterations (last change {change:.3g})",
                    ConvergenceWarning,
                )
            self.n_iter_.append(it)
            for v in range(k):
                t = D[v] @ w[v]
                weights[v][:, j] = B[v] @ w[v]
                tt = t @ t
                if tt <= 0:
                    continue
                load = D[v].T @ t / tt
                B[v] = B[v] - np.outer(B[v] @ w[v], load)
                D[v] = D[v] - np.outer(t, load)

        weights = list(fix_signs(*weights))
        scores = [(X - m) @ W for X, m, W in zip(ds, self.means_, weights)]
        corrs = _mean_pairwise_corr(scores)
        order = np.argsort(-corrs, kind="stable")
        self.weights_ = [W[:, order] for W in weights]
        self.canon_corrs_ = np.clip(corrs[order], 0.0, 1.0)
        self.n_features_in_ = ds.n_features
        return self

    @staticmethod
    def _init_weights(C, S, R):
        k = len(C)
        sizes = [Sv.shape[0] for Sv in S]
        offs = np.concatenate([[0], np.cumsum(sizes)])
        T = np.zeros((offs[-1], offs[-1]))
        for v in range(k):
            for u in range(k):
                if u != v:
                    T[offs[v]:offs[v + 1], offs[u]:offs[u + 1]] = S[v] @ C[v][u] @ S[u]
        _, e = top_eigh(T, 1)
        e = e[:, 0]
        return [_normalize(S[v] @ e[offs[v]:offs[v + 1]], R[v]) for v in range(k)]

    def transform(self, Xs, y=None):
        self._check_fitted("weights_")
        ds = validate_views(Xs)
        check_widths(ds, self.n_features_in_)
        return [(X - m) @ W for X, m, W in zip(ds, self.means_, self.weights_)]


def _normalize(w, R):
    q = w @ R @ w
    if q <= 0:
        return w
    return w / np.sqrt(q)


KERNELS = ("linear", "polynomial", "rbf")


def kernel_matrix(X, Y, kind="linear", degree=3, coef0=1.0, gamma=None):
    """Kernel evaluations between the rows of ``X`` and ``Y``."""
    if kind == "linear":
        return X @ Y.T
    if kind == "polynomial":
        return (X @ Y.T + coef0) ** degree
    if kind == "rbf":
        D = (X * X).sum(1)[:, None] + (Y * Y).sum(1)[None, :] - 2.0 * X @ Y.T
        return np.exp(-gamma * np.maximum(D, 0.0))
    raise KernelError(f"unknown kernel {kind!r}; choose from {KERNELS}")


def center_gram(K):
    """``K - 1K - K1 + 1K1`` with ``1`` the all-``1/n`` matrix."""
    row = K.mean(axis=0, keepdims=True)
    col = K.mean(axis=1, keepdims=True)
    return K - row - col + K.mean()


class KMCCA(BaseMultiview):
    r"""Kernel multiview CCA.

    Solves :math:`A\alpha = \rho B\alpha` where ``A`` has blocks
    :math:`K_v K_u` off the diagonal and zeros on it, and ``B`` is block
    diagonal with :math:`(K_v + \varepsilon I)^2`, all Gram matrices being
    centered. Each Gram matrix is first reduced to its numerical range, on
    which the problem becomes a symmetric standard eigenproblem.

    Parameters
    ----------
    n_components : int, default=1
    kernel : {'linear', 'polynomial', 'rbf'}, default='linear'
    regularization : float, default=0.1
        The ``epsilon`` above. Must be positive when a centered Gram matrix
        has rank below ``n - 1``.
    degree, coef0 : polynomial kernel parameters
    gamma : float, optional
        rbf bandwidth; defaults to ``1 / n_features``.

    Attributes
    ----------
    dual_coef_ : list of ndarray, (n_samples, n_components)
        Scaled so training scores have unit sample variance.
    eigenvalues_ : ndarray
    canon_corrs_ : ndarray
        Mean pairwise correlation of the training scores.
    """

    def __init__(
        self,
        n_components=1,
        kernel="linear",
        regularization=0.1,
        degree=3,
        coef0=1.0,
        gamma=None,
        rank_rtol=1e-10,
    ):
        self.n_components = n_components
        self.kernel = kernel
        self.regularization = regularization
        self.degree = degree
        self.coef0 = coef0
        self.gamma = gamma
        self.rank_rtol = rank_rtol

    def _check_kernel(self):
        if self.kernel not in KERNELS:
            raise KernelError(f"unknown kernel {self.kernel!r}; choose from {KERNELS}")
        if self.kernel == "polynomial" and (int(self.degree) != self.degree or self.degree < 1):
            raise KernelError("polynomial degree must be an integer >= 1")
        if self.kernel == "rbf" and self.gamma is not None and not self.gamma > 0:
            raise KernelError("rbf gamma must be > 0")
        if not 0 <= self.regularization:
            raise KernelError("regularization must be >= 0")

    def _gram(self, X, Y, v):
        return kernel_matrix(
            X, Y, self.kernel, self.degree, self.coef0, self.gammas_[v]
        )

    def fit(self, Xs, y=None):
        self._check_kernel()
        ds = validate_views(Xs, min_k=2, min_samples=2)
        k, n = ds.n_views, ds.n_samples
        r = self.n_components
        eps = float(self.regularization)
        self.gammas_ = [
            (self.gamma if self.gamma is not None else 1.0 / X.shape[1])
            if self.kernel == "rbf" else None
            for X in ds
        ]
        self.train_views_ = list(ds.views)
        raw = [self._gram(X, X, v) for v, X in enumerate(ds)]
        self._raw_col_means = [K.mean(axis=0) for K in raw]
        self._raw_means = [K.mean() for K in raw]
        Kc = [center_gram(K) for K in raw]

        bases, shrink = [], []
        for v, K in enumerate(Kc):
            lam, Q = linalg.eigh((K + K.T) / 2.0)
            keep = lam > self.rank_rtol * max(lam.max(), 0.0)
            if keep.sum() < n - 1 and eps <= 0:
                raise KernelError(
                    f"centered Gram matrix of view {v} is singular "
                    f"(rank {keep.sum()} < {n - 1}); regularization must be > 0"
                )
            lam, Q = lam[keep], Q[:, keep]
            bases.append((lam, Q))
            shrink.append(lam / (lam + eps))
        sizes = [len(lam) for lam, _ in bases]
        if r > min(sizes):
            raise RankError(
                f"n_components={r} exceeds the smallest Gram rank {min(sizes)}"
            )
        offs = np.concatenate([[0], np.cumsum(sizes)])
        A = np.zeros((offs[-1], offs[-1]))
        for v in range(k):
            for u in range(v + 1, k):
                blk = (shrink[v][:, None] * (bases[v][1].T @ bases[u][1])) * shrink[u][None, :]
                A[offs[v]:offs[v + 1], offs[u]:offs[u + 1]] = blk
                A[offs[u]:offs[u + 1], offs[v]:offs[v + 1]] = blk.T
        evals, E = top_eigh(A, r)

        alphas, scores = [], []
        for v, (lam, Q) in enumerate(bases):
            g = E[offs[v]:offs[v + 1]]
            a = Q @ (g / (lam + eps)[:, None])
            t = Kc[v] @ a
            sd = t.std(axis=0, ddof=1)
            sd[sd == 0] = 1.0
            alphas.append(a / sd)
            scores.append(t / sd)
        alphas = list(fix_signs(*alphas))
        scores = [Kc[v] @ alphas[v] for v in range(k)]
        self.dual_coef_ = alphas
        self.eigenvalues_ = evals
        self.canon_corrs_ = np.clip(_mean_pairwise_corr(scores), 0.0, 1.0)
        self.n_features_in_ = ds.n_features
        return self

    def transform(self, Xs, y=None):
        """Scores of new samples, via kernels against the training samples."""
        self._check_fitted("dual_coef_")
        ds = validate_views(Xs)
        check_widths(ds, self.n_features_in_)
        out = []
        for v, X in enumerate(ds):
            K = self._gram(X, self.train_views_[v], v)
            Kc = (
                K
                - K.mean(axis=1, keepdims=True)
                - self._raw_col_means[v][None, :]
                + self._raw_means[v]
            )
            out.append(Kc @ self.dual_coef_[v])
        return out


def mcca_fit(ds, n_components=1, regularization=0.0, tol=1e-6, max_iter=500):
    return MCCA(n_components, regularization, tol, max_iter).fit(ds)


def kmcca_fit(ds, n_components=1, kernel="linear", regularization=0.1, **kernel_params):
    return KMCCA(n_components, kernel, regularization, **kernel_params).fit(ds)
