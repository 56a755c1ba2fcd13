"""Multiview data model, validation and estimator plumbing.

A multiview dataset is an ordered list of matrices that share their rows:
row ``i`` of every view describes sample ``i``. Views may have different
numbers of columns.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .exceptions import (
    EmptyInput,
    LengthMismatch,
    NonFinite,
    NotFitted,
    ShapeMismatch,
    ValidationError,
    ViewCountError,
)

#: Marker for an unlabeled sample in a label vector.
UNLABELED = np.nan


def is_unlabeled(y):
    """Boolean mask of entries of ``y`` carrying the unlabeled marker."""
    y = np.asarray(y, dtype=float)
    return np.isnan(y)


@dataclass(frozen=True, eq=False)
class MultiviewDataset:
    """Validated views with matched rows and optional labels.

    Instances are produced by :func:`validate_views`; the arrays they hold
    are read-only so a dataset can be shared freely.
    """

    views: tuple
    labels: Optional[np.ndarray] = None
    feature_names: Optional[tuple] = None

    @property
    def n_views(self) -> int:
        return len(self.views)

    @property
    def n_samples(self) -> int:
        return self.views[0].shape[0]

    @property
    def n_features(self) -> tuple:
        return tuple(X.shape[1] for X in self.views)

    def __len__(self):
        return len(self.views)

    def __iter__(self):
        return iter(self.views)

    def __getitem__(self, idx):
        return self.views[idx]

    def __eq__(self, other):
        if not isinstance(other, MultiviewDataset):
            return NotImplemented
        if self.n_views != other.n_views:
            return False
        if any(
            a.shape != b.shape or not np.array_equal(a, b)
            for a, b in zip(self.views, other.views)
        ):
            return False
        if (self.labels is None) != (other.labels is None):
            return False
        if self.labels is not None and not np.array_equal(
            self.labels, other.labels, equal_nan=True
        ):
            return False
        return self.feature_names == other.feature_names


def _readonly(a):
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


def validate_views(
    views,
    y=None,
    require_k: Optional[int] = None,
    min_k: int = 1,
    min_samples: int = 1,
    feature_names=None,
) -> MultiviewDataset:
    """Validate a sequence of views and return a :class:`MultiviewDataset`.

    Parameters
    ----------
    views : sequence of array-like or MultiviewDataset
        Each element is an ``(n_samples, n_features_v)`` matrix.
    y : array-like, optional
        Labels of length ``n_samples``. ``nan`` marks unlabeled samples.
    require_k : int, optional
        Exact number of views required.
    min_k : int
        Minimum number of views.
    min_samples : int
        Minimum number of rows.
    feature_names : sequence of sequences of str, optional
        Per-view column names.

    Raises
    ------
    EmptyInput, ShapeMismatch, NonFinite, ViewCountError, LengthMismatch
    """
    if isinstance(views, MultiviewDataset):
        if y is None:
            y = views.labels
        if feature_names is None:
            feature_names = views.feature_names
        views = views.views
    if isinstance(views, np.ndarray) and views.ndim == 2:
        raise ValidationError(
            "expected a sequence of view matrices, got a single 2-d array; "
            "wrap it in a list"
        )
    views = list(views)
    if len(views) == 0:
        raise EmptyInput("no views given")
    if require_k is not None and len(views) != require_k:
        raise ViewCountError(
            f"this estimator needs exactly {require_k} views, got {len(views)}"
        )
    if len(views) < min_k:
        raise ViewCountError(f"need at least {min_k} views, got {len(views)}")

    checked = []
    for v, X in enumerate(views):
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        if X.ndim != 2:
            raise ValidationError(f"view {v} has {X.ndim} dimensions, expected 2")
        if X.size == 0:
            raise EmptyInput(f"view {v} is empty (shape {X.shape})")
        if not np.all(np.isfinite(X)):
            bad = np.argwhere(~np.isfinite(X))[0]
            raise NonFinite(
                f"view {v} has a non-finite entry at row {bad[0]}, column {bad[1]}"
            )
        checked.append(X)

    n = checked[0].shape[0]
    for v, X in enumerate(checked[1:], start=1):
        if X.shape[0] != n:
            raise ShapeMismatch(
                f"view 0 has {n} samples but view {v} has {X.shape[0]}"
            )
    if n < min_samples:
        raise ValidationError(f"need at least {min_samples} samples, got {n}")

    labels = None
    if y is not None:
        labels = np.asarray(y)
        if labels.ndim != 1:
            labels = labels.ravel()
        if labels.shape[0] != n:
            raise LengthMismatch(
                f"labels have length {labels.shape[0]} but views have {n} samples"
            )
        labels = _readonly(labels)

    if feature_names is not None:
        feature_names = tuple(
            None if names is None else tuple(str(s) for s in names)
            for names in feature_names
        )
        if len(feature_names) != len(checked):
            raise LengthMismatch("one feature-name list per view is required")
        for v, (names, X) in enumerate(zip(feature_names, checked)):
            if names is not None and len(names) != X.shape[1]:
                raise LengthMismatch(
                    f"view {v} has {X.shape[1]} columns but {len(names)} names"
                )

    return MultiviewDataset(
        views=tuple(_readonly(X) for X in checked),
        labels=labels,
        feature_names=feature_names,
    )


@dataclass(frozen=True)
class ScaleStats:
    """Per-view statistics recorded by :func:`center_scale`."""

    means: tuple
    scales: tuple
    zero_variance: tuple = field(default_factory=tuple)

    def inverse(self, ds) -> MultiviewDataset:
        """Undo :func:`center_scale` on ``ds``."""
        ds = validate_views(ds)
        views = [
            X * s + m for X, m, s in zip(ds.views, self.means, self.scales)
        ]
        return validate_views(views, y=ds.labels, feature_names=ds.feature_names)


def center_scale(ds, center: bool = True, unit_variance: bool = False):
    """Center and optionally standardize every column of every view.

    Standard deviations use the ``n - 1`` denominator. Columns with zero
    variance keep scale 1 and are reported in ``stats.zero_variance``.

    Returns
    -------
    scaled : MultiviewDataset
    stats : ScaleStats
    """
    ds = validate_views(ds)
    views, means, scales, flags = [], [], [], []
    for X in ds.views:
        d = X.shape[1]
        m = X.mean(axis=0) if center else np.zeros(d)
        s = np.ones(d)
        zero = np.zeros(d, dtype=bool)
        if unit_variance:
            if X.shape[0] > 1:
                sd = X.std(axis=0, ddof=1)
            else:
                sd = np.zeros(d)
            zero = sd <= np.finfo(float).eps * np.maximum(np.abs(X).max(axis=0), 1.0)
            s = np.where(zero, 1.0, sd)
        views.append((X - m) / s)
        means.append(_readonly(m))
        scales.append(_readonly(s))
        flags.append(_readonly(zero))
    stats = ScaleStats(tuple(means), tuple(scales), tuple(flags))
    return (
        validate_views(views, y=ds.labels, feature_names=ds.feature_names),
        stats,
    )


def adjusted_rand_index(a, b) -> float:
    """Adjusted Rand index between two labelings of the same samples."""
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    if a.shape[0] != b.shape[0]:
        raise LengthMismatch(f"label vectors differ in length: {a.shape[0]} vs {b.shape[0]}")
    n = a.shape[0]
    if n < 2:
        raise LengthMismatch("need at least two samples")
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    table = np.zeros((ai.max() + 1, bi.max() + 1), dtype=np.int64)
    np.add.at(table, (ai, bi), 1)

    def comb2(x):
        x = np.asarray(x, dtype=float)
        return (x * (x - 1.0) / 2.0).sum()

    sum_ij = comb2(table)
    sum_a = comb2(table.sum(axis=1))
    sum_b = comb2(table.sum(axis=0))
    total = n * (n - 1) / 2.0
    expected = sum_a * sum_b / total
    max_index = (sum_a + sum_b) / 2.0
    if max_index == expected:
        # both partitions trivial (all-singletons or one cluster)
        return 1.0
    return float((sum_ij - expected) / (max_index - expected))


def accuracy(y_true, y_pred) -> float:
    y_true = np.asarray(y_true).ravel()
    y_pred = np.asarray(y_pred).ravel()
    if y_true.shape != y_pred.shape:
        raise LengthMismatch("label vectors differ in length")
    return float(np.mean(y_true == y_pred))


def rmse(y_true, y_pred) -> float:
    y_true = np.asarray(y_true, dtype=float).ravel()
    y_pred = np.asarray(y_pred, dtype=float).ravel()
    if y_true.shape != y_pred.shape:
        raise LengthMismatch("target vectors differ in length")
    return float(np.sqrt(np.mean((y_true - y_pred) ** 2)))


def make_rng(seed, *keys):
    """Generator keyed by ``(seed, *keys)``; independent of call order."""
    if isinstance(seed, np.random.Generator):
        if keys:
            raise TypeError("keys require an integer seed")
        return seed
    if seed is None:
        return np.random.default_rng()
    return np.random.default_rng([int(seed) & 0xFFFFFFFFFFFFFFFF, *keys])


def fix_signs(*mats, ref=0):
    """Flip columns so the largest-magnitude entry of ``mats[ref]`` is positive.

    The same flips are applied to every matrix in ``mats``.
    """
    R = mats[ref]
    idx = np.argmax(np.abs(R), axis=0)
    signs = np.sign(R[idx, np.arange(R.shape[1])])
    signs[signs == 0] = 1.0
    return tuple(M * signs for M in mats)


class BaseMultiview:
    """Shared lifecycle for multiview estimators.

    Hyperparameters are set in ``__init__``; fitted attributes end with an
    underscore and only exist after ``fit``.
    """

    def _check_fitted(self, attr):
        if not hasattr(self, attr):
            raise NotFitted(
                f"this {type(self).__name__} instance is not fitted yet; call fit first"
            )

    def get_params(self):
        import inspect

        sig = inspect.signature(type(self).__init__)
        return {
            name: getattr(self, name)
            for name in sig.parameters
            if name != "self"
        }

    def __repr__(self):
        params = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({params})"

    def fit_transform(self, Xs, y=None):
        return self.fit(Xs, y).transform(Xs)


def check_widths(ds: MultiviewDataset, widths: Sequence[int]):
    if tuple(ds.n_features) != tuple(widths):
        raise ShapeMismatch(
            f"views have widths {tuple(ds.n_features)} but the model was "
            f"fitted on widths {tuple(widths)}"
        )
