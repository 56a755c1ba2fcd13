"""Two-view canonical correlation analysis."""

import numpy as np
from scipy import linalg

from .._linalg import inv_sqrt_psd
from ..core import BaseMultiview, check_widths, fix_signs, validate_views
from ..exceptions import BadParams, RankError


class CCA(BaseMultiview):
    r"""Canonical correlation analysis of two views.

    The weights solve the SVD of
    :math:`(\Sigma_{11} + \lambda I)^{-1/2} \Sigma_{12} (\Sigma_{22} + \lambda I)^{-1/2}`
    with covariances computed from centered data (``n - 1`` denominator).

    Parameters
    ----------
    n_components : int, default=1
        Number of canonical pairs to keep.
    regularization : float, default=0
        Ridge added to each within-view covariance. With 0 the covariances
        must be nonsingular.

    Attributes
    ----------
    weights_ : list of ndarray, each (n_features_v, n_components)
    canon_corrs_ : ndarray, (n_components,)
        Canonical correlations in decreasing order, clipped to [0, 1].
    means_ : list of ndarray
    """

    def __init__(self, n_components=1, regularization=0.0):
        self.n_components = n_components
        self.regularization = regularization

    def fit(self, Xs, y=None):
        ds = validate_views(Xs, require_k=2, min_samples=2)
        if self.regularization < 0:
            raise BadParams("regularization must be >= 0")
        n = ds.n_samples
        d1, d2 = ds.n_features
        r = self.n_components
        if not 1 <= r <= min(d1, d2, n - 1):
            raise RankError(
                f"n_components={r} must lie in [1, min(d1, d2, n-1)] = "
                f"[1, {min(d1, d2, n - 1)}]"
            )
        self.means_ = [X.mean(axis=0) for X in ds]
        X1, X2 = (X - m for X, m in zip(ds, self.means_))
        C11 = X1.T @ X1 / (n - 1)
        C22 = X2.T @ X2 / (n - 1)
        C12 = X1.T @ X2 / (n - 1)
        R1 = inv_sqrt_psd(C11, self.regularization)
        R2 = inv_sqrt_psd(C22, self.regularization)
        U, s, Vt = linalg.svd(R1 @ C12 @ R2)
        W1 = R1 @ U[:, :r]
        W2 = R2 @ Vt[:r].T
        W1, W2 = fix_signs(W1, W2)
        self.weights_ = [W1, W2]
        self.canon_corrs_ = np.clip(s[:r], 0.0, 1.0)
        self.n_features_in_ = (d1, d2)
        return self

    def transform(self, Xs, y=None):
        """Canonical scores ``(X_v - mean_v) @ W_v`` for both views."""
        self._check_fitted("weights_")
        ds = validate_views(Xs, require_k=2)
        check_widths(ds, self.n_features_in_)
        return [(X - m) @ W for X, m, W in zip(ds, self.means_, self.weights_)]


def cca_fit(ds, n_components=1, regularization=0.0):
    return CCA(n_components, regularization).fit(ds)


def cca_transform(model, ds):
    return model.transform(ds)
