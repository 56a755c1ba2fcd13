"""Multiview multidimensional scaling and omnibus embedding."""

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .._linalg import double_center, sq_dists
from ..core import fix_signs, validate_views
from ..exceptions import BadParams, RankError


def classical_mds(X, n_components):
    """Top eigenvectors of the double-centered squared distance matrix."""
    B = -0.5 * double_center(sq_dists(np.asarray(X, dtype=float)))
    evals, evecs = linalg.eigh(B)
    order = np.argsort(evals)[::-1][:n_components]
    return evecs[:, order], evals[order]


def mvmds_fit_transform(Xs, n_components=2):
    """Common principal coordinates of several views.

    Components are extracted one at a time as the leading eigenvector of
    the summed double-centered matrices, restricted to the orthogonal
    complement of the components found so far; every view's matrix is
    deflated after each step.

    Returns
    -------
    components : ndarray, (n_samples, n_components)
        Orthonormal columns.
    eigenvalues : ndarray, (n_components,)
    """
    ds = validate_views(Xs, min_k=2)
    n = ds.n_samples
    if n < 3:
        raise RankError("MVMDS needs at least 3 samples")
    r = n_components
    if not 1 <= r <= n - 1:
        raise RankError(f"n_components={r} must be in [1, {n - 1}]")
    Bs = [-0.5 * double_center(sq_dists(X)) for X in ds]
    Q = np.zeros((n, 0))
    evals = []
    for _ in range(r):
        # orthonormal basis of the complement of the found components
        N = linalg.null_space(Q.T) if Q.shape[1] else np.eye(n)
        S = sum(N.T @ B @ N for B in Bs)
        lam, E = linalg.eigh((S + S.T) / 2.0)
        q = N @ E[:, -1]
        q /= linalg.norm(q)
        P = np.eye(n) - np.outer(q, q)
        Bs = [P @ B @ P for B in Bs]
        Q = np.column_stack([Q, q])
        evals.append(lam[-1])
    (Q,) = fix_signs(Q)
    return Q, np.array(evals)


class MVMDS:
    """Estimator wrapper around :func:`mvmds_fit_transform`."""

    def __init__(self, n_components=2):
        self.n_components = n_components

    def fit(self, Xs, y=None):
        self.components_, self.eigenvalues_ = mvmds_fit_transform(Xs, self.n_components)
        return self

    def fit_transform(self, Xs, y=None):
        return self.fit(Xs).components_


@dataclass(frozen=True)
class OmnibusResult:
    embeddings: list
    eigenvalues: np.ndarray
    omnibus: np.ndarray


def omnibus_matrix(Xs, distance="euclidean"):
    """Block matrix with per-view distance matrices on the diagonal and
    pairwise averages elsewhere."""
    if distance != "euclidean":
        raise BadParams(f"unsupported distance {distance!r}")
    ds = validate_views(Xs, min_k=2)
    A = [np.sqrt(sq_dists(X)) for X in ds]
    return np.block([[(Av + Au) / 2.0 for Au in A] for Av in A])


def omnibus_fit_transform(Xs, n_components=2, distance="euclidean"):
    """Joint spectral embedding of all views through the omnibus matrix.

    Eigenpairs are ranked by eigenvalue magnitude; each embedding row is an
    eigenvector row scaled by ``sqrt(|eigenvalue|)``.
    """
    ds = validate_views(Xs, min_k=2)
    k, n = ds.n_views, ds.n_samples
    if n < 3:
        raise RankError("omnibus embedding needs at least 3 samples")
    if not 1 <= n_components <= k * n:
        raise RankError(f"n_components={n_components} must be in [1, {k * n}]")
    M = omnibus_matrix(ds, distance)
    lam, V = linalg.eigh(M)
    order = np.argsort(-np.abs(lam), kind="stable")[:n_components]
    lam, V = lam[order], V[:, order]
    (V,) = fix_signs(V)
    Z = V * np.sqrt(np.abs(lam))
    return OmnibusResult(
        embeddings=[Z[v * n:(v + 1) * n] for v in range(k)],
        eigenvalues=lam,
        omnibus=M,
    )


class Omnibus:
    def __init__(self, n_components=2, distance="euclidean"):
        self.n_components = n_components
        self.distance = distance

    def fit(self, Xs, y=None):
        res = omnibus_fit_transform(Xs, self.n_components, self.distance)
        self.embeddings_ = res.embeddings
        self.eigenvalues_ = res.eigenvalues
        return self

    def fit_transform(self, Xs, y=None):
        return self.fit(Xs).embeddings_
