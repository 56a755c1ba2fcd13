"""Building multiview datasets out of single matrices, and back."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import MultiviewDataset, make_rng, validate_views
from .exceptions import BadBoundaries, BadSpec


@dataclass(frozen=True)
class SubspaceSpec:
    n_views: int
    subset_size: int
    seed: int = 0


@dataclass(frozen=True)
class ProjectionSpec:
    n_views: int
    n_components: int
    seed: int = 0


def _as_matrix(X):
    ds = validate_views([X])
    return ds.views[0]


def subspace_indices(n_features: int, spec: SubspaceSpec) -> list:
    """Column index lists drawn by :func:`random_subspace`.

    Each view gets ``subset_size`` distinct columns; views are drawn
    independently and may overlap.
    """
    if spec.n_views < 1:
        raise BadSpec(f"n_views must be >= 1, got {spec.n_views}")
    if not 1 <= spec.subset_size <= n_features:
        raise BadSpec(
            f"subset_size must be in [1, {n_features}], got {spec.subset_size}"
        )
    return [
        make_rng(spec.seed, 0, v).choice(n_features, spec.subset_size, replace=False)
        for v in range(spec.n_views)
    ]


def random_subspace(X, spec: SubspaceSpec) -> MultiviewDataset:
    """Views made of random column subsets of ``X``.

    The selected column indices are stored as each view's feature names.
    """
    X = _as_matrix(X)
    idx = subspace_indices(X.shape[1], spec)
    return validate_views(
        [X[:, cols] for cols in idx],
        feature_names=[[str(c) for c in cols] for cols in idx],
    )


def gaussian_projection_matrices(n_features: int, spec: ProjectionSpec) -> list:
    if spec.n_views < 1:
        raise BadSpec(f"n_views must be >= 1, got {spec.n_views}")
    if spec.n_components < 1:
        raise BadSpec(f"n_components must be >= 1, got {spec.n_components}")
    scale = 1.0 / np.sqrt(spec.n_components)
    return [
        make_rng(spec.seed, 1, v).normal(0.0, scale, size=(n_features, spec.n_components))
        for v in range(spec.n_views)
    ]


def random_gaussian_projection(X, spec: ProjectionSpec) -> MultiviewDataset:
    """Views ``X @ R_v`` with ``R_v`` i.i.d. normal of variance ``1/n_components``.

    Squared norms are preserved in expectation.
    """
    X = _as_matrix(X)
    mats = gaussian_projection_matrices(X.shape[1], spec)
    return validate_views([X @ R for R in mats])


def concat_views(ds) -> np.ndarray:
    ds = validate_views(ds)
    return np.hstack(ds.views)


def split_features(X, boundaries) -> MultiviewDataset:
    """Split the columns of ``X`` into contiguous blocks at ``boundaries``."""
    X = _as_matrix(X)
    d = X.shape[1]
    b = [int(i) for i in boundaries]
    edges = [0, *b, d]
    if any(lo >= hi for lo, hi in zip(edges[:-1], edges[1:])):
        raise BadBoundaries(
            f"boundaries must be strictly increasing inside (0, {d}), got {b}"
        )
    return validate_views([X[:, lo:hi] for lo, hi in zip(edges[:-1], edges[1:])])


class RandomSubspace:
    """Transformer wrapper around :func:`random_subspace`.

    Fitting records the column subsets so new data of the same width is
    split identically.
    """

    def __init__(self, n_views, subset_size, seed=0):
        self.n_views = n_views
        self.subset_size = subset_size
        self.seed = seed

    def fit(self, X, y=None):
        X = _as_matrix(X)
        spec = SubspaceSpec(self.n_views, self.subset_size, self.seed)
        self.subspace_indices_ = subspace_indices(X.shape[1], spec)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        X = _as_matrix(X)
        return validate_views([X[:, cols] for cols in self.subspace_indices_])

    def fit_transform(self, X, y=None):
        return self.fit(X).transform(X)


class GaussianRandomProjection:
    def __init__(self, n_views, n_components, seed=0):
        self.n_views = n_views
        self.n_components = n_components
        self.seed = seed

    def fit(self, X, y=None):
        X = _as_matrix(X)
        spec = ProjectionSpec(self.n_views, self.n_components, self.seed)
        self.components_ = gaussian_projection_matrices(X.shape[1], spec)
        return self

    def transform(self, X):
        X = _as_matrix(X)
        return validate_views([X @ R for R in self.components_])

    def fit_transform(self, X, y=None):
        return self.fit(X).transform(X)
