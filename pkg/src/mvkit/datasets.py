"""Synthetic multiview data and an on-disk directory format.

A dataset directory holds one CSV file per view, an optional
``labels.csv`` and a ``manifest.json``::

    {"views": ["view_0.csv", "view_1.csv"], "labels": "labels.csv",
     "n_samples": 150, "header": false, "label_kind": "int"}

Without a manifest, files matching ``view_*.csv`` are read in
lexicographic order together with ``labels.csv`` when present.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
from scipy import linalg

from .core import MultiviewDataset, make_rng, validate_views
from .exceptions import BadSpec, IoError, ParseError, ShapeMismatch

MANIFEST = "manifest.json"


@dataclass(frozen=True)
class SyntheticSpec:
    n_samples: int = 200
    latent_dim: int = 2
    view_dims: Sequence[int] = (10, 10)
    noise_sigma: float = 0.1
    n_clusters: int = 0
    separation: float = 8.0
    seed: int = 0


def simplex_centers(n_clusters, dim, separation):
    """Cluster centers at pairwise distance ``separation``, centered at 0."""
    if n_clusters == 1:
        return np.zeros((1, dim))
    E = np.eye(n_clusters) * separation / np.sqrt(2.0)
    E -= E.mean(axis=0)
    # orthonormal coordinates of the (n_clusters - 1)-dim hyperplane
    basis = linalg.null_space(np.ones((1, n_clusters)))
    C = E @ basis
    out = np.zeros((n_clusters, dim))
    out[:, : n_clusters - 1] = C
    return out


def make_latent_views(spec: SyntheticSpec):
    """Views generated from a shared latent variable.

    View ``v`` is ``z @ A_v.T + noise`` where ``A_v`` has orthonormal
    columns. With ``n_clusters > 0`` the latent rows come from a spherical
    Gaussian mixture whose centers sit on a regular simplex with pairwise
    distance ``separation``; otherwise they are standard normal.

    Returns
    -------
    ds : MultiviewDataset
        Carries the cluster labels when ``n_clusters > 0``.
    latent : ndarray, (n_samples, latent_dim)
    labels : ndarray or None
    """
    dims = [int(d) for d in spec.view_dims]
    if spec.n_samples < 1 or spec.latent_dim < 1 or not dims:
        raise BadSpec("n_samples, latent_dim and view_dims must be positive")
    if spec.latent_dim > min(dims):
        raise BadSpec(f"latent_dim {spec.latent_dim} exceeds the smallest view width {min(dims)}")
    if spec.noise_sigma < 0:
        raise BadSpec("noise_sigma must be >= 0")
    if spec.n_clusters < 0:
        raise BadSpec("n_clusters must be >= 0")
    if spec.n_clusters > 0:
        if spec.separation <= 0:
            raise BadSpec("separation must be > 0 with clusters")
        if spec.n_clusters - 1 > spec.latent_dim:
            raise BadSpec("clustered latents need latent_dim >= n_clusters - 1")

    n, q = spec.n_samples, spec.latent_dim
    rng = make_rng(spec.seed, 0)
    labels = None
    if spec.n_clusters > 0:
        centers = simplex_centers(spec.n_clusters, q, spec.separation)
        labels = rng.integers(spec.n_clusters, size=n)
        z = centers[labels] + rng.standard_normal((n, q))
    else:
        z = rng.standard_normal((n, q))
    views = []
    for v, d in enumerate(dims):
        vrng = make_rng(spec.seed, 1, v)
        A, _ = linalg.qr(vrng.standard_normal((d, q)), mode="economic")
        X = z @ A.T
        if spec.noise_sigma > 0:
            X = X + spec.noise_sigma * vrng.standard_normal((n, d))
        views.append(X)
    ds = validate_views(views, y=labels)
    return ds, z, labels


# -- directory format ----------------------------------------------------


def _fmt(x):
    return "%.17g" % x


def save_multiview_dir(ds, path, force=False, header=False) -> dict:
    """Write ``ds`` to ``path``; refuses to overwrite unless ``force``.

    Returns the manifest dictionary.
    """
    ds = validate_views(ds)
    path = Path(path)
    if path.exists() and any(path.iterdir()) and not force:
        raise IoError(f"{path} exists and is not empty; pass force=True to overwrite")
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise IoError(f"cannot create {path}: {exc}") from exc

    names = []
    for v, X in enumerate(ds):
        name = f"view_{v}.csv"
        cols = None
        if header:
            fn = ds.feature_names[v] if ds.feature_names else None
            cols = fn or [f"x{j}" for j in range(X.shape[1])]
        _write_csv(path / name, X, cols, _fmt)
        names.append(name)

    manifest = {
        "views": names,
        "labels": None,
        "n_samples": ds.n_samples,
        "header": bool(header),
    }
    if ds.labels is not None:
        y = np.asarray(ds.labels)
        if np.issubdtype(y.dtype, np.integer):
            kind, fmt = "int", lambda x: "%d" % x
        else:
            kind, fmt = "float", _fmt
            y = y.astype(float)
        _write_csv(path / "labels.csv", y.reshape(-1, 1), ["label"] if header else None, fmt)
        manifest["labels"] = "labels.csv"
        manifest["label_kind"] = kind
    _write_text(path / MANIFEST, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest


def _write_text(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def _write_csv(path, X, columns, fmt):
    lines = []
    if columns is not None:
        lines.append(",".join(columns))
    for row in X:
        lines.append(",".join(fmt(x) for x in row))
    _write_text(path, "\n".join(lines) + "\n")


def read_csv_matrix(path, header=False) -> np.ndarray:
    """Parse a numeric CSV file; errors report line and column."""
    path = Path(path)
    try:
        fh = open(path, encoding="utf-8", newline="")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    rows = []
    width = None
    with fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if header and lineno == 1:
                continue
            if not row or all(not c.strip() for c in row):
                continue
            try:
                vals = [float(c) for c in row]
            except ValueError:
                col = next(j for j, c in enumerate(row, start=1) if not _is_float(c))
                raise ParseError(f"cannot parse {row[col - 1]!r} as a number", path, lineno, col)
            if width is None:
                width = len(vals)
            elif len(vals) != width:
                raise ParseError(f"expected {width} fields, found {len(vals)}", path, lineno)
            rows.append(vals)
    if not rows:
        raise ParseError("no data rows", path)
    return np.asarray(rows, dtype=float)


def _is_float(s):
    try:
        float(s)
        return True
    except ValueError:
        return False


def read_manifest(path) -> Optional[dict]:
    mpath = Path(path) / MANIFEST
    if not mpath.exists():
        return None
    try:
        return json.loads(mpath.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"invalid manifest: {exc}", mpath)


def load_multiview_dir(path, manifest: Optional[dict] = None) -> MultiviewDataset:
    """Load a dataset directory written by :func:`save_multiview_dir`."""
    path = Path(path)
    if not path.is_dir():
        raise IoError(f"{path} is not a directory")
    if manifest is None:
        manifest = read_manifest(path)
    if manifest is None:
        views = sorted(p.name for p in path.glob("view_*.csv"))
        if not views:
            raise IoError(f"no view_*.csv files in {path}")
        manifest = {
            "views": views,
            "labels": "labels.csv" if (path / "labels.csv").exists() else None,
            "header": False,
        }
    header = bool(manifest.get("header", False))
    files = list(manifest["views"])
    mats = [read_csv_matrix(path / f, header) for f in files]
    for f, X in zip(files[1:], mats[1:]):
        if X.shape[0] != mats[0].shape[0]:
            raise ShapeMismatch(
                f"{files[0]} has {mats[0].shape[0]} rows but {f} has {X.shape[0]}"
            )
    declared = manifest.get("n_samples")
    if declared is not None and declared != mats[0].shape[0]:
        raise ShapeMismatch(
            f"manifest declares {declared} samples but {files[0]} has {mats[0].shape[0]}"
        )
    labels = None
    if manifest.get("labels"):
        lab_file = manifest["labels"]
        y = read_csv_matrix(path / lab_file, header)
        if y.shape[1] != 1:
            raise ParseError("labels file must have a single column", path / lab_file)
        y = y[:, 0]
        if y.shape[0] != mats[0].shape[0]:
            raise ShapeMismatch(
                f"{files[0]} has {mats[0].shape[0]} rows but {lab_file} has {y.shape[0]}"
            )
        kind = manifest.get("label_kind")
        if kind == "int" or (kind is None and np.all(np.isfinite(y)) and np.all(y == np.round(y))):
            y = y.astype(np.int64)
        labels = y
    names = None
    if header:
        names = []
        for f in files:
            with open(path / f, encoding="utf-8", newline="") as fh:
                names.append(next(csv.reader(fh)))
    return validate_views(mats, y=labels, feature_names=names)
