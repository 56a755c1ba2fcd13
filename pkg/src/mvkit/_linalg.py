import numpy as np
from scipy import linalg

from .exceptions import NumericalFailure


def inv_sqrt_psd(C, reg=0.0, pseudo=False, rtol=1e-10):
    """``(C + reg I)^{-1/2}`` for a symmetric PSD matrix.

    With ``pseudo=True`` eigenvalues below ``rtol * max`` are dropped
    instead of raising.
    """
    C = C + reg * np.eye(C.shape[0])
    evals, evecs = linalg.eigh(C)
    top = max(evals.max(), 0.0)
    keep = evals > rtol * top
    if not keep.all() and not pseudo:
        raise NumericalFailure(
            "covariance matrix is singular or ill-conditioned "
            f"(smallest eigenvalue {evals.min():.3g}); "
            "set a positive regularization"
        )
    inv = np.zeros_like(evals)
    inv[keep] = 1.0 / np.sqrt(evals[keep])
    return (evecs * inv) @ evecs.T


def top_eigh(M, k):
    """Leading ``k`` eigenpairs of a symmetric matrix, descending."""
    n = M.shape[0]
    evals, evecs = linalg.eigh(M, subset_by_index=[n - k, n - 1])
    return evals[::-1], evecs[:, ::-1]


def sq_dists(X, Y=None):
    """Pairwise squared Euclidean distances, clipped at zero."""
    if Y is None:
        Y = X
    D = (X * X).sum(1)[:, None] + (Y * Y).sum(1)[None, :] - 2.0 * X @ Y.T
    np.maximum(D, 0.0, out=D)
    if Y is X:
        np.fill_diagonal(D, 0.0)
        D = (D + D.T) / 2.0
    return D


def double_center(M):
    """``J M J`` with ``J = I - 11^T / n``."""
    M = M - M.mean(axis=0, keepdims=True)
    return M - M.mean(axis=1, keepdims=True)
