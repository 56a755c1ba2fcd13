"""Multiview clustering.

Two co-EM k-means variants for two views (Euclidean and spherical), and
two spectral methods for any number of views: co-trained spectral
clustering and pairwise co-regularized spectral clustering.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._linalg import sq_dists, top_eigh
from .core import BaseMultiview, fix_signs, make_rng, validate_views
from .exceptions import BadParams, NumericalFailure, ZeroRow


@dataclass(frozen=True)
class ClusterParams:
    n_clusters: int
    max_iter: int = 100
    tol: float = 1e-6
    n_init: int = 5
    seed: int = 0


@dataclass(frozen=True)
class AffinityParams:
    kind: str = "rbf"
    gamma: object = "median"
    n_neighbors: int = 10
    coupling: float = 0.5
    info_iter: int = 10


@dataclass
class ClusterResult:
    labels: np.ndarray
    centers: list = field(default_factory=list)
    embeddings: list = field(default_factory=list)
    n_iter: int = 0
    objective: float = 0.0
    converged: bool = True
    objective_trace: list = field(default_factory=list)


def _check_params(params: ClusterParams, n):
    if params.n_clusters < 1 or params.n_clusters > n:
        raise BadParams(f"n_clusters must be in [1, {n}], got {params.n_clusters}")
    if params.n_init < 1 or params.max_iter < 1:
        raise BadParams("n_init and max_iter must be >= 1")


# -- single-view building blocks ------------------------------------------


def _kmeanspp(X, k, rng, dist):
    n = X.shape[0]
    centers = [X[rng.integers(n)]]
    d = dist(X, np.asarray(centers)).min(axis=1)
    for _ in range(1, k):
        total = d.sum()
        if total <= 0:
            idx = rng.integers(n)
        else:
            idx = rng.choice(n, p=d / total)
        centers.append(X[idx])
        d = np.minimum(d, dist(X, X[idx][None, :])[:, 0])
    return np.asarray(centers)


def _euclid(X, C):
    return sq_dists(X, C)


def _cosine(X, C):
    # rows of X and C are unit norm
    return np.maximum(1.0 - X @ C.T, 0.0)


def _unit_rows(X):
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def _centers(X, labels, k, previous, dist, spherical):
    d = X.shape[1]
    C = np.zeros((k, d))
    counts = np.bincount(labels, minlength=k)
    np.add.at(C, labels, X)
    empty = counts == 0
    C[~empty] /= counts[~empty, None]
    if spherical:
        norms = np.linalg.norm(C, axis=1)
        empty |= norms <= 1e-12
        C[~empty] /= norms[~empty, None]
    if empty.any():
        if previous is not None:
            C[empty] = previous[empty]
        else:
            # reseed with the points worst served by the current centers
            far = np.argsort(-dist(X, C[~empty]).min(axis=1), kind="stable")
            C[empty] = X[far[: empty.sum()]]
    return C


def kmeans(X, n_clusters, seed=0, n_init=5, max_iter=100, tol=1e-6, stream=0):
    """Lloyd's algorithm with k-means++ seeding, best of ``n_init`` runs.

    Returns ``(labels, centers, inertia)``.
    """
    X = np.asarray(X, dtype=float)
    best = None
    for run in range(n_init):
        rng = make_rng(seed, 10, stream, run)
        C = _kmeanspp(X, n_clusters, rng, _euclid)
        for _ in range(max_iter):
            labels = _euclid(X, C).argmin(axis=1)
            newC = _centers(X, labels, n_clusters, C, _euclid, False)
            shift = np.abs(newC - C).max()
            C = newC
            if shift <= tol:
                break
        D = _euclid(X, C)
        labels = D.argmin(axis=1)
        inertia = D[np.arange(len(X)), labels].sum()
        if best is None or inertia < best[2]:
            best = (labels, C, inertia)
    return best


# -- co-EM k-means --------------------------------------------------------


def _mean_pairwise(X, spherical):
    n = X.shape[0]
    if n < 2:
        return 1.0
    if spherical:
        s = X.sum(axis=0)
        val = 1.0 - (s @ s - n) / (n * (n - 1))
    else:
        val = 2.0 * n / (n - 1) * ((X - X.mean(axis=0)) ** 2).sum(axis=1).mean()
    return val if val > 0 else 1.0


class MultiviewKMeans(BaseMultiview):
    """Two-view co-EM k-means.

    Centroids are seeded in the second view. Each half-iteration assigns
    samples in one view and re-estimates the centroids of the other view
    from those assignments. Final labels minimize the sum over views of the
    distance to each cluster's centroid, each view's distances divided by
    that view's mean pairwise distance.

    Parameters
    ----------
    n_clusters : int
    max_iter, tol, n_init, seed
        See :class:`ClusterParams`. ``tol`` is unused by the co-EM loop,
        which stops when both views' assignments repeat.
    """

    _spherical = False

    def __init__(self, n_clusters=2, max_iter=100, tol=1e-6, n_init=5, seed=0):
        self.n_clusters = n_clusters
        self.max_iter = max_iter
        self.tol = tol
        self.n_init = n_init
        self.seed = seed

    def _prepare(self, ds):
        return list(ds.views)

    def fit(self, Xs, y=None):
        ds = validate_views(Xs, require_k=2)
        params = ClusterParams(self.n_clusters, self.max_iter, self.tol, self.n_init, self.seed)
        _check_params(params, ds.n_samples)
        Xs = self._prepare(ds)
        dist = _cosine if self._spherical else _euclid
        scale = [_mean_pairwise(X, self._spherical) for X in Xs]
        k = self.n_clusters

        best = None
        self.restart_objectives_ = []
        for run in range(self.n_init):
            rng = make_rng(self.seed, 20, run)
            C2 = _kmeanspp(Xs[1], k, rng, dist)
            if self._spherical:
                C2 = _unit_rows(C2)
            lab2 = dist(Xs[1], C2).argmin(axis=1)
            C1, lab1 = None, None
            converged = False
            for it in range(1, self.max_iter + 1):
                C1 = _centers(Xs[0], lab2, k, C1, dist, self._spherical)
                new1 = dist(Xs[0], C1).argmin(axis=1)
                C2 = _centers(Xs[1], new1, k, C2, dist, self._spherical)
                new2 = dist(Xs[1], C2).argmin(axis=1)
                same = lab1 is not None and np.array_equal(new1, lab1) and np.array_equal(new2, lab2)
                lab1, lab2 = new1, new2
                if same:
                    converged = True
                    break
            cost = dist(Xs[0], C1) / scale[0] + dist(Xs[1], C2) / scale[1]
            labels = cost.argmin(axis=1)
            obj = float(cost[np.arange(len(labels)), labels].sum())
            self.restart_objectives_.append(obj)
            if best is None or obj < best.objective:
                best = ClusterResult(
                    labels=labels,
                    centers=[C1, C2],
                    n_iter=it,
                    objective=obj,
                    converged=converged,
                )
        self.result_ = best
        self.labels_ = best.labels
        self.centroids_ = best.centers
        self.n_iter_ = best.n_iter
        self.objective_ = best.objective
        self.converged_ = best.converged
        self._scale = scale
        return self

    def predict(self, Xs):
        self._check_fitted("centroids_")
        ds = validate_views(Xs, require_k=2)
        Xs = self._prepare(ds)
        dist = _cosine if self._spherical else _euclid
        cost = sum(dist(X, C) / s for X, C, s in zip(Xs, self.centroids_, self._scale))
        return cost.argmin(axis=1)

    def fit_predict(self, Xs, y=None):
        return self.fit(Xs).labels_


class MultiviewSphericalKMeans(MultiviewKMeans):
    """Co-EM k-means on the unit sphere with ``1 - cosine`` as distance."""

    _spherical = True

    def _prepare(self, ds):
        out = []
        for v, X in enumerate(ds):
            norms = np.linalg.norm(X, axis=1)
            if np.any(norms == 0):
                raise ZeroRow(
                    f"sample {int(np.argmax(norms == 0))} has zero norm in view {v}"
                )
            out.append(X / norms[:, None])
        return out


# -- spectral methods ----------------------------------------------------


def median_gamma(X):
    D = sq_dists(X)
    vals = D[np.triu_indices(D.shape[0], 1)]
    med = np.median(vals)
    return 1.0 / med if med > 0 else 1.0


def affinity_matrix(X, affinity: AffinityParams):
    """Symmetric nonnegative affinity between the rows of ``X``."""
    n = X.shape[0]
    if affinity.kind == "rbf":
        gamma = affinity.gamma
        if gamma is None or gamma == "median":
            gamma = median_gamma(X)
        elif not gamma > 0:
            raise BadParams("rbf gamma must be > 0")
        W = np.exp(-gamma * sq_dists(X))
    elif affinity.kind == "knn":
        k = affinity.n_neighbors
        if not 1 <= k < n:
            raise BadParams(f"n_neighbors must be in [1, {n - 1}]")
        D = sq_dists(X)
        np.fill_diagonal(D, np.inf)
        nn = np.argsort(D, axis=1, kind="stable")[:, :k]
        W = np.zeros((n, n))
        W[np.repeat(np.arange(n), k), nn.ravel()] = 1.0
        W = (W + W.T) / 2.0
    else:
        raise BadParams(f"unknown affinity kind {affinity.kind!r}")
    return (W + W.T) / 2.0


def normalized_affinity(W):
    """``D^{-1/2} W D^{-1/2}``; degrees are taken in absolute value."""
    d = np.abs(W.sum(axis=1))
    inv = np.zeros_like(d)
    nz = d > 0
    inv[nz] = 1.0 / np.sqrt(d[nz])
    L = inv[:, None] * W * inv[None, :]
    return (L + L.T) / 2.0


def spectral_embedding(L, k):
    try:
        _, U = top_eigh(L, k)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigensolver failed in spectral embedding: {exc}") from exc
    (U,) = fix_signs(U)
    return U


def _kmeans_rows(U, params: ClusterParams, stream):
    norms = np.linalg.norm(U, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    labels, _, inertia = kmeans(
        U / norms,
        params.n_clusters,
        seed=params.seed,
        n_init=params.n_init,
        max_iter=params.max_iter,
        tol=params.tol,
        stream=stream,
    )
    return labels, inertia


class MultiviewSpectralClustering(BaseMultiview):
    """Co-trained spectral clustering.

    Every round projects each view's affinity onto the spectral subspace of
    the next view (round-robin), ``W_v <- P_u W_v P_u``, and recomputes the
    view's embedding. The final labels come from k-means on the
    row-normalized concatenation of all embeddings.

    Parameters
    ----------
    n_clusters : int
    info_iter : int, default=10
        Number of co-training rounds.
    affinity : {'rbf', 'knn'}
    gamma : float or 'median'
    n_neighbors : int
    max_iter, n_init, seed : k-means settings
    """

    def __init__(
        self,
        n_clusters=2,
        info_iter=10,
        affinity="rbf",
        gamma="median",
        n_neighbors=10,
        max_iter=100,
        n_init=5,
        seed=0,
    ):
        self.n_clusters = n_clusters
        self.info_iter = info_iter
        self.affinity = affinity
        self.gamma = gamma
        self.n_neighbors = n_neighbors
        self.max_iter = max_iter
        self.n_init = n_init
        self.seed = seed

    def fit(self, Xs, y=None):
        ds = validate_views(Xs, min_k=2)
        n, k = ds.n_samples, ds.n_views
        params = ClusterParams(self.n_clusters, self.max_iter, 1e-6, self.n_init, self.seed)
        _check_params(params, n)
        if n < self.n_clusters + 1:
            raise BadParams("need at least n_clusters + 1 samples")
        if self.info_iter < 0:
            raise BadParams("info_iter must be >= 0")
        aff = AffinityParams(self.affinity, self.gamma, self.n_neighbors, 0.0, self.info_iter)
        W = [affinity_matrix(X, aff) for X in ds]
        U = [spectral_embedding(normalized_affinity(Wv), self.n_clusters) for Wv in W]
        for _ in range(self.info_iter):
            P = [Uv @ Uv.T for Uv in U]
            U = [
                spectral_embedding(normalized_affinity(P[(v + 1) % k] @ W[v] @ P[(v + 1) % k]),
                                   self.n_clusters)
                for v in range(k)
            ]
        labels, inertia = _kmeans_rows(np.hstack(U), params, 30)
        self.affinities_ = W
        self.embeddings_ = U
        self.labels_ = labels
        self.result_ = ClusterResult(
            labels=labels, embeddings=U, n_iter=self.info_iter, objective=float(inertia)
        )
        return self

    def fit_predict(self, Xs, y=None):
        return self.fit(Xs).labels_


class CoRegMultiviewSpectralClustering(BaseMultiview):
    r"""Pairwise co-regularized spectral clustering.

    Maximizes :math:`\sum_v tr(U_v^T L_v U_v) + \lambda \sum_{u<v}
    tr(U_u U_u^T U_v U_v^T)` by cycling over views; each update is the top
    eigenvectors of :math:`L_v + \lambda \sum_{u \ne v} U_u U_u^T`, so the
    objective never decreases. Labels come from k-means on the
    row-normalized embedding of the first view.

    Attributes
    ----------
    objective_trace_ : list of float
        Objective after initialization and after every single-view update.
    """

    def __init__(
        self,
        n_clusters=2,
        coupling=0.5,
        affinity="rbf",
        gamma="median",
        n_neighbors=10,
        max_iter=100,
        tol=1e-6,
        n_init=5,
        seed=0,
    ):
        self.n_clusters = n_clusters
        self.coupling = coupling
        self.affinity = affinity
        self.gamma = gamma
        self.n_neighbors = n_neighbors
        self.max_iter = max_iter
        self.tol = tol
        self.n_init = n_init
        self.seed = seed

    @staticmethod
    def _objective(L, U, lam):
        val = sum(np.trace(Uv.T @ Lv @ Uv) for Lv, Uv in zip(L, U))
        k = len(U)
        for a in range(k):
            for b in range(a + 1, k):
                val += lam * np.sum((U[a].T @ U[b]) ** 2)
        return float(val)

    def fit(self, Xs, y=None):
        ds = validate_views(Xs, min_k=2)
        n, k = ds.n_samples, ds.n_views
        params = ClusterParams(self.n_clusters, self.max_iter, self.tol, self.n_init, self.seed)
        _check_params(params, n)
        if self.coupling < 0:
            raise BadParams("coupling must be >= 0")
        aff = AffinityParams(self.affinity, self.gamma, self.n_neighbors, self.coupling, 0)
        L = [normalized_affinity(affinity_matrix(X, aff)) for X in ds]
        U = [spectral_embedding(Lv, self.n_clusters) for Lv in L]
        lam = float(self.coupling)
        trace = [self._objective(L, U, lam)]
        converged = False
        it = 0
        if lam == 0:
            converged = True
        else:
            for it in range(1, self.max_iter + 1):
                start = trace[-1]
                for v in range(k):
                    M = L[v] + lam * sum(U[u] @ U[u].T for u in range(k) if u != v)
                    U[v] = spectral_embedding(M, self.n_clusters)
                    trace.append(self._objective(L, U, lam))
                if trace[-1] - start < self.tol * max(1.0, abs(start)):
                    converged = True
                    break
        labels, _ = _kmeans_rows(U[0], params, 40)
        self.embeddings_ = U
        self.objective_trace_ = trace
        self.labels_ = labels
        self.n_iter_ = it
        self.converged_ = converged
        self.result_ = ClusterResult(
            labels=labels,
            embeddings=U,
            n_iter=it,
            objective=trace[-1],
            converged=converged,
            objective_trace=trace,
        )
        return self

    def fit_predict(self, Xs, y=None):
        return self.fit(Xs).labels_


def mv_kmeans_fit_predict(ds, params: ClusterParams) -> ClusterResult:
    return MultiviewKMeans(params.n_clusters, params.max_iter, params.tol, params.n_init, params.seed).fit(ds).result_


def mv_spherical_kmeans_fit_predict(ds, params: ClusterParams) -> ClusterResult:
    return MultiviewSphericalKMeans(params.n_clusters, params.max_iter, params.tol, params.n_init, params.seed).fit(ds).result_


def mv_spectral_fit_predict(ds, params: ClusterParams, affinity: AffinityParams = AffinityParams()) -> ClusterResult:
    return MultiviewSpectralClustering(
        params.n_clusters, affinity.info_iter, affinity.kind, affinity.gamma,
        affinity.n_neighbors, params.max_iter, params.n_init, params.seed,
    ).fit(ds).result_


def coreg_spectral_fit_predict(ds, params: ClusterParams, affinity: AffinityParams = AffinityParams()) -> ClusterResult:
    return CoRegMultiviewSpectralClustering(
        params.n_clusters, affinity.coupling, affinity.kind, affinity.gamma,
        affinity.n_neighbors, params.max_iter, params.tol, params.n_init, params.seed,
    ).fit(ds).result_
