"""Command-line front end.

    mvkit <synth|compose|embed|cluster|semisup|decompose> --in DIR --out DIR
          --algo NAME [--seed N] [--plot] [key=value ...]

Exit codes: 0 success, 2 usage error, 3 data validation error,
4 numerical failure or non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .cluster import (
    CoRegMultiviewSpectralClustering,
    MultiviewKMeans,
    MultiviewSphericalKMeans,
    MultiviewSpectralClustering,
)
from .compose import (
    ProjectionSpec,
    SubspaceSpec,
    concat_views,
    random_gaussian_projection,
    random_subspace,
    split_features,
)
from .core import accuracy, adjusted_rand_index, is_unlabeled, make_rng, rmse, validate_views
from .datasets import SyntheticSpec, load_multiview_dir, make_latent_views, save_multiview_dir
from .decompose import AjiveParams, ajive_fit, group_ica_fit, group_pca_fit_transform
from .embed import CCA, GCCA, KMCCA, MCCA, mvmds_fit_transform, omnibus_fit_transform
from .exceptions import ConvergenceWarning, NumericalError, ParameterError, ValidationError
from .plotting import emit_scatter_svg
from .semisup import CTClassifier, CTRegressor

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 2, 3, 4


class UsageError(Exception):
    pass


class NotConverged(Exception):
    pass


# -- parameter parsing -------------------------------------------------------


def _int_list(s):
    return [int(x) for x in s.split(",") if x != ""]


def _gamma(s):
    return s if s == "median" else float(s)


def _opt_float(s):
    return None if s in ("none", "None", "") else float(s)


def _opt_int(s):
    return None if s in ("none", "None", "") else int(s)


ALGORITHMS = {
    "synth": {
        "latent": {
            "n_samples": (int, 150),
            "latent_dim": (int, 2),
            "view_dims": (_int_list, [10, 10]),
            "noise": (float, 0.5),
        },
    },
    "compose": {
        "random-subspace": {"n_views": (int, 2), "subset_size": (int, None)},
        "gaussian-projection": {"n_views": (int, 2), "n_components": (int, 2)},
        "split": {"boundaries": (_int_list, None)},
        "concat": {},
    },
    "embed": {
        "cca": {"n_components": (int, 2), "regularization": (float, 0.0)},
        "mcca": {
            "n_components": (int, 2),
            "regularization": (float, 0.0),
            "tol": (float, 1e-6),
            "max_iter": (int, 500),
        },
        "kmcca": {
            "n_components": (int, 2),
            "kernel": (str, "linear"),
            "regularization": (float, 0.1),
            "gamma": (_opt_float, None),
            "degree": (int, 3),
            "coef0": (float, 1.0),
        },
        "gcca": {"n_components": (int, 2), "rank_tolerance": (float, 0.999)},
        "mvmds": {"n_components": (int, 2)},
        "omnibus": {"n_components": (int, 2)},
    },
    "cluster": {
        "mv-kmeans": {"n_clusters": (_opt_int, None), "max_iter": (int, 100), "n_init": (int, 5)},
        "mv-spherical-kmeans": {"n_clusters": (_opt_int, None), "max_iter": (int, 100), "n_init": (int, 5)},
        "mv-spectral": {
            "n_clusters": (_opt_int, None),
            "info_iter": (int, 10),
            "affinity": (str, "rbf"),
            "gamma": (_gamma, "median"),
            "n_neighbors": (int, 10),
            "n_init": (int, 5),
        },
        "coreg-spectral": {
            "n_clusters": (_opt_int, None),
            "coupling": (float, 0.5),
            "affinity": (str, "rbf"),
            "gamma": (_gamma, "median"),
            "n_neighbors": (int, 10),
            "max_iter": (int, 100),
            "tol": (float, 1e-6),
            "n_init": (int, 5),
        },
    },
    "semisup": {
        "cotrain-classifier": {
            "labeled_fraction": (float, 0.05),
            "p": (int, 1),
            "n": (int, 1),
            "pool_size": (int, 75),
            "max_rounds": (int, 30),
        },
        "cotrain-regressor": {
            "labeled_fraction": (float, 0.05),
            "pool_size": (int, 75),
            "max_rounds": (int, 100),
        },
    },
    "decompose": {
        "ajive": {
            "ranks": (_int_list, None),
            "n_resamples": (int, 500),
            "quantile": (float, 0.95),
        },
        "group-pca": {"ranks": (_int_list, None), "n_components": (_opt_int, None)},
        "group-ica": {
            "ranks": (_int_list, None),
            "n_components": (_opt_int, None),
            "tol": (float, 1e-4),
            "max_iter": (int, 200),
        },
    },
}


def parse_params(command, algo, items):
    table = ALGORITHMS[command]
    if algo not in table:
        raise UsageError(
            f"unknown algorithm {algo!r} for '{command}'; registered: {', '.join(sorted(table))}"
        )
    schema = table[algo]
    params = {k: default for k, (_, default) in schema.items()}
    for item in items:
        if "=" not in item:
            raise UsageError(f"expected key=value, got {item!r}")
        key, value = item.split("=", 1)
        if key not in schema:
            allowed = ", ".join(sorted(schema)) or "(none)"
            raise UsageError(f"unknown parameter {key!r} for {algo}; allowed: {allowed}")
        try:
            params[key] = schema[key][0](value)
        except ValueError as exc:
            raise UsageError(f"bad value for {key}: {value!r} ({exc})") from exc
    return params


# -- output helpers ----------------------------------------------------------


def _fmt(x):
    return "%.17g" % x


def write_matrix(path, X):
    X = np.asarray(X)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if np.issubdtype(X.dtype, np.integer):
        lines = [",".join("%d" % v for v in row) for row in X]
    else:
        lines = [",".join(_fmt(v) for v in row) for row in X.astype(float)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_json(path, obj):
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _flat_numbers(d):
    out = {}
    for k, v in d.items():
        if isinstance(v, (bool, np.bool_)):
            out[k] = int(v)
        elif isinstance(v, (int, np.integer)):
            out[k] = int(v)
        else:
            out[k] = float(v)
    return out


def _check_converged(model, stage):
    if getattr(model, "converged_", True) is False:
        raise NotConverged(f"{stage}: solver did not converge")


def _plot(args, out, embedding, labels, name="plot.svg"):
    if args.plot:
        emit_scatter_svg(embedding, labels, out / name)


# -- subcommands -------------------------------------------------------------


def run_synth(args, params, out):
    clusters = args.clusters or 0
    spec = SyntheticSpec(
        n_samples=params["n_samples"],
        latent_dim=max(params["latent_dim"], clusters - 1),
        view_dims=tuple(params["view_dims"]),
        noise_sigma=params["noise"],
        n_clusters=clusters,
        separation=args.sep,
        seed=args.seed,
    )
    ds, _, labels = make_latent_views(spec)
    save_multiview_dir(ds, out, force=True)
    _plot(args, out, ds[0], labels)
    return {"n_samples": ds.n_samples, "n_views": ds.n_views}


def run_compose(args, params, out, ds):
    X = concat_views(ds)
    algo = args.algo
    if algo == "random-subspace":
        size = params["subset_size"] or max(1, X.shape[1] // 2)
        res = random_subspace(X, SubspaceSpec(params["n_views"], size, args.seed))
    elif algo == "gaussian-projection":
        res = random_gaussian_projection(X, ProjectionSpec(params["n_views"], params["n_components"], args.seed))
    elif algo == "split":
        res = split_features(X, params["boundaries"] or [])
    else:
        res = validate_views([X])
    res = validate_views(res, y=ds.labels)
    save_multiview_dir(res, out, force=True)
    if args.plot:
        _plot(args, out, res[0], ds.labels)
    return {"n_views": res.n_views, **{f"width_{v}": w for v, w in enumerate(res.n_features)}}


def run_embed(args, params, out, ds):
    algo = args.algo
    summary = {}
    if algo in ("cca", "mcca", "kmcca", "gcca"):
        if algo == "cca":
            model = CCA(params["n_components"], params["regularization"])
        elif algo == "mcca":
            model = MCCA(params["n_components"], params["regularization"], params["tol"], params["max_iter"])
        elif algo == "kmcca":
            model = KMCCA(
                params["n_components"], params["kernel"], params["regularization"],
                params["degree"], params["coef0"], params["gamma"],
            )
        else:
            model = GCCA(params["n_components"], params["rank_tolerance"])
        scores = model.fit(ds).transform(ds)
        _check_converged(model, f"embed/{algo}")
        if hasattr(model, "canon_corrs_"):
            summary.update({f"canon_corr_{j}": c for j, c in enumerate(model.canon_corrs_)})
        if hasattr(model, "singular_values_"):
            summary.update({f"singular_value_{j}": s for j, s in enumerate(model.singular_values_)})
        for v, S in enumerate(scores):
            write_matrix(out / f"embedding_{v}.csv", S)
        _plot(args, out, scores[0], ds.labels)
    elif algo == "mvmds":
        Q, evals = mvmds_fit_transform(ds, params["n_components"])
        write_matrix(out / "embedding.csv", Q)
        summary.update({f"eigenvalue_{j}": e for j, e in enumerate(evals)})
        _plot(args, out, Q, ds.labels)
    else:
        res = omnibus_fit_transform(ds, params["n_components"])
        for v, Z in enumerate(res.embeddings):
            write_matrix(out / f"embedding_{v}.csv", Z)
        summary.update({f"eigenvalue_{j}": e for j, e in enumerate(res.eigenvalues)})
        _plot(args, out, res.embeddings[0], ds.labels)
    write_json(out / "summary.json", _flat_numbers(summary))
    return summary


def run_cluster(args, params, out, ds):
    k = params["n_clusters"]
    if k is None:
        if ds.labels is None:
            raise UsageError("n_clusters=K is required when the dataset has no labels")
        y = np.asarray(ds.labels, dtype=float)
        k = len(np.unique(y[~np.isnan(y)]))
    algo = args.algo
    if algo == "mv-kmeans":
        model = MultiviewKMeans(k, params["max_iter"], n_init=params["n_init"], seed=args.seed)
    elif algo == "mv-spherical-kmeans":
        model = MultiviewSphericalKMeans(k, params["max_iter"], n_init=params["n_init"], seed=args.seed)
    elif algo == "mv-spectral":
        model = MultiviewSpectralClustering(
            k, params["info_iter"], params["affinity"], params["gamma"],
            params["n_neighbors"], n_init=params["n_init"], seed=args.seed,
        )
    else:
        model = CoRegMultiviewSpectralClustering(
            k, params["coupling"], params["affinity"], params["gamma"], params["n_neighbors"],
            params["max_iter"], params["tol"], params["n_init"], seed=args.seed,
        )
    labels = model.fit_predict(ds)
    write_matrix(out / "labels.csv", labels.astype(np.int64))
    metrics = {"n_clusters": k, "objective": model.result_.objective, "n_iter": model.result_.n_iter}
    if ds.labels is not None:
        metrics["ari"] = adjusted_rand_index(ds.labels, labels)
    write_json(out / "metrics.json", _flat_numbers(metrics))
    _plot(args, out, ds[0], labels)
    _check_converged(model, f"cluster/{algo}")
    return metrics


def run_semisup(args, params, out, ds):
    if ds.labels is None:
        raise ValidationError("semisup needs a dataset with labels")
    y_full = np.asarray(ds.labels, dtype=float)
    y = y_full.copy()
    hidden = is_unlabeled(y)
    if not hidden.any():
        frac = params["labeled_fraction"]
        if not 0 < frac <= 1:
            raise UsageError("labeled_fraction must be in (0, 1]")
        rng = make_rng(args.seed, 99)
        hidden = rng.random(len(y)) >= frac
        y[hidden] = np.nan
    if args.algo == "cotrain-classifier":
        model = CTClassifier(
            p=params["p"], n=params["n"], unlabeled_pool_size=params["pool_size"],
            max_rounds=params["max_rounds"], seed=args.seed,
        ).fit(ds, y)
        pred = model.predict(ds)
        metrics = {"n_rounds": model.n_rounds_, "n_labeled": int((~is_unlabeled(y)).sum())}
        truth = ~is_unlabeled(y_full) & hidden
        if truth.any():
            metrics["accuracy"] = accuracy(y_full[truth], pred[truth])
    else:
        model = CTRegressor(
            unlabeled_pool_size=params["pool_size"], max_rounds=params["max_rounds"], seed=args.seed
        ).fit(ds, y)
        pred = model.predict(ds)
        metrics = {"n_rounds": model.n_rounds_, "n_labeled": int((~is_unlabeled(y)).sum())}
        truth = ~is_unlabeled(y_full) & hidden
        if truth.any():
            metrics["rmse"] = rmse(y_full[truth], pred[truth])
    write_matrix(out / "predictions.csv", pred)
    write_json(out / "metrics.json", _flat_numbers(metrics))
    _plot(args, out, ds[0], pred)
    return metrics


def run_decompose(args, params, out, ds):
    algo = args.algo
    summary = {}
    if algo == "ajive":
        ranks = params["ranks"]
        if not ranks:
            raise UsageError("ajive needs ranks=R1,R2")
        res = ajive_fit(ds, AjiveParams(tuple(ranks), params["n_resamples"], params["quantile"], args.seed))
        write_matrix(out / "common_scores.csv", res.common_scores)
        for v in range(ds.n_views):
            write_matrix(out / f"joint_{v}.csv", res.joint[v])
            write_matrix(out / f"individual_{v}.csv", res.individual[v])
            write_matrix(out / f"noise_{v}.csv", res.noise[v])
            summary[f"individual_rank_{v}"] = res.individual_ranks[v]
        summary["joint_rank"] = res.joint_rank
        summary["wedin_threshold"] = res.wedin_threshold
        summary["random_threshold"] = res.random_threshold
        if res.joint_rank >= 2:
            _plot(args, out, res.common_scores, ds.labels)
    elif algo == "group-pca":
        res = group_pca_fit_transform(ds, params["ranks"], params["n_components"])
        write_matrix(out / "scores.csv", res.scores)
        summary.update({f"singular_value_{j}": s for j, s in enumerate(res.singular_values)})
        _plot(args, out, res.scores, ds.labels)
    else:
        res = group_ica_fit(
            ds, params["ranks"], params["n_components"], params["tol"], params["max_iter"], args.seed
        )
        write_matrix(out / "sources.csv", res.sources)
        for v, A in enumerate(res.mixing):
            write_matrix(out / f"mixing_{v}.csv", A)
        summary["converged"] = res.converged
        summary["n_iter"] = res.n_iter
        _plot(args, out, res.sources, ds.labels)
    write_json(out / "summary.json", _flat_numbers(summary))
    if algo == "group-ica" and not res.converged:
        raise NotConverged("decompose/group-ica: FastICA did not converge")
    return summary


RUNNERS = {
    "compose": run_compose,
    "embed": run_embed,
    "cluster": run_cluster,
    "semisup": run_semisup,
    "decompose": run_decompose,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="mvkit", description="Multiview learning pipelines.")
    parser.add_argument("--version", action="version", version=f"mvkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("synth", *RUNNERS):
        p = sub.add_parser(name)
        p.add_argument("--in", dest="input", required=name != "synth")
        p.add_argument("--out", dest="output", required=True)
        p.add_argument("--algo", required=name != "synth", default="latent" if name == "synth" else None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--plot", action="store_true")
        if name == "synth":
            p.add_argument("--clusters", type=int, default=0)
            p.add_argument("--sep", type=float, default=8.0)
        p.add_argument("params", nargs="*", metavar="key=value")
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        params = parse_params(args.command, args.algo, args.params)
        out = Path(args.output)
        if args.input is not None and out.resolve() == Path(args.input).resolve():
            raise UsageError("--out must differ from --in")
        out.mkdir(parents=True, exist_ok=True)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ConvergenceWarning)
            if args.command == "synth":
                result = run_synth(args, params, out)
                ds_in = None
            else:
                ds_in = load_multiview_dir(args.input)
                result = RUNNERS[args.command](args, params, out, ds_in)
        write_json(
            out / "run.json",
            {
                "command": args.command,
                "algo": args.algo,
                "input": args.input,
                "output": args.output,
                "params": {k: v for k, v in sorted(params.items())},
                "seed": args.seed,
                "plot": args.plot,
                "clusters": getattr(args, "clusters", None),
                "sep": getattr(args, "sep", None),
                "version": __version__,
            },
        )
    except UsageError as exc:
        print(f"mvkit {args.command}: usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except ParameterError as exc:
        print(f"mvkit {args.command}: invalid parameter: {exc}", file=stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"mvkit {args.command}: data error: {exc}", file=stderr)
        return EXIT_DATA
    except (NumericalError, NotConverged, np.linalg.LinAlgError) as exc:
        print(f"mvkit {args.command}: numerical failure in {args.command}/{args.algo}: {exc}", file=stderr)
        return EXIT_NUMERIC
    summary = " ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}" for k, v in result.items())
    print(f"mvkit {args.command} {args.algo}: {summary}", file=stdout)
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
