"""Generalized CCA through per-view SVD followed by a joint SVD."""

from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy import linalg

from ..core import BaseMultiview, check_widths, fix_signs, validate_views
from ..exceptions import BadParams, RankError


def _view_basis(X, rank, tol):
    U, s, _ = linalg.svd(X, full_matrices=False)
    if rank is None:
        energy = np.cumsum(s ** 2)
        if energy[-1] <= 0:
            raise RankError("a view has zero variance")
        rank = int(np.searchsorted(energy / energy[-1], tol - 1e-12) + 1)
    rank = min(rank, int(np.sum(s > s[0] * 1e-12)))
    return U[:, :rank]


class GCCA(BaseMultiview):
    """Generalized CCA for any number of views.

    Each centered view is compressed to its leading left singular vectors;
    the joint embedding ``G`` holds the top left singular vectors of the
    column-stacked bases. Per-view maps to ``G`` are least-squares fits.

    Parameters
    ----------
    n_components : int, default=1
    rank_tolerance : float, default=0.999
        Fraction of squared singular value mass kept per view.
    ranks : sequence of int, optional
        Explicit per-view ranks; overrides ``rank_tolerance``.
    n_jobs : int, default=1
        Threads for the per-view SVD stage. Results do not depend on it.
    """

    def __init__(self, n_components=1, rank_tolerance=0.999, ranks=None, n_jobs=1):
        self.n_components = n_components
        self.rank_tolerance = rank_tolerance
        self.ranks = ranks
        self.n_jobs = n_jobs

    def fit(self, Xs, y=None):
        ds = validate_views(Xs, min_k=2, min_samples=2)
        k = ds.n_views
        if not 0 < self.rank_tolerance <= 1:
            raise BadParams("rank_tolerance must be in (0, 1]")
        ranks = [None] * k if self.ranks is None else list(self.ranks)
        if len(ranks) != k:
            raise BadParams(f"ranks has {len(ranks)} entries for {k} views")
        for v, (rv, X) in enumerate(zip(ranks, ds)):
            if rv is not None and not 1 <= rv <= min(X.shape):
                raise RankError(f"rank {rv} invalid for view {v} of shape {X.shape}")
        self.means_ = [X.mean(axis=0) for X in ds]
        Xc = [X - m for X, m in zip(ds, self.means_)]

        jobs = [(X, rv, self.rank_tolerance) for X, rv in zip(Xc, ranks)]
        if self.n_jobs == 1:
            bases = [_view_basis(*j) for j in jobs]
        else:
            with ThreadPoolExecutor(max_workers=self.n_jobs) as pool:
                bases = list(pool.map(lambda j: _view_basis(*j), jobs))
        self.ranks_ = [U.shape[1] for U in bases]
        r = self.n_components
        if not 1 <= r <= sum(self.ranks_):
            raise RankError(
                f"n_components={r} must be in [1, {sum(self.ranks_)}] "
                f"(sum of per-view ranks {self.ranks_})"
            )
        M = np.hstack(bases)
        G, s, _ = linalg.svd(M, full_matrices=False)
        (G,) = fix_signs(G[:, :r])
        self.joint_ = G
        self.singular_values_ = s[:r]
        self.projections_ = [linalg.lstsq(X, G)[0] for X in Xc]
        self.n_features_in_ = ds.n_features
        return self

    def transform(self, Xs, y=None):
        """Per-view estimates of the joint embedding."""
        self._check_fitted("projections_")
        ds = validate_views(Xs)
        check_widths(ds, self.n_features_in_)
        return [(X - m) @ W for X, m, W in zip(ds, self.means_, self.projections_)]


def gcca_fit(ds, n_components=1, rank_tolerance=0.999, ranks=None, n_jobs=1):
    return GCCA(n_components, rank_tolerance, ranks, n_jobs).fit(ds)
