"""
Datasets on disk and the command line
=====================================

A dataset directory holds one CSV per view, an optional ``labels.csv``
and a JSON manifest. The ``mvkit`` command reads such directories and
writes results next to a ``run.json`` that records how they were made.
"""

import json
import tempfile
from pathlib import Path

from mvkit.cli import run
from mvkit.datasets import SyntheticSpec, load_multiview_dir, make_latent_views, save_multiview_dir

work = Path(tempfile.mkdtemp())
ds, _, _ = make_latent_views(SyntheticSpec(120, 2, (6, 4), 0.3, n_clusters=3, seed=2))
save_multiview_dir(ds, work / "blobs")
print(sorted(p.name for p in (work / "blobs").iterdir()))
assert load_multiview_dir(work / "blobs") == ds

# %%
# The same thing from the shell:
#
#   mvkit synth --out data --clusters 3 --sep 8
#   mvkit cluster --in data --out result --algo mv-kmeans --plot
code = run(["synth", "--out", str(work / "data"), "--clusters", "3", "--sep", "8"])
code = run(["cluster", "--in", str(work / "data"), "--out", str(work / "result"), "--algo", "mv-kmeans", "--plot"])
print("exit code", code)
print(json.loads((work / "result" / "metrics.json").read_text()))

# %%
# Errors map to exit codes: 2 for usage, 3 for bad data, 4 for numerical trouble.
print("unknown algorithm ->", run(["embed", "--in", str(work / "data"), "--out", str(work / "x"), "--algo", "pls"]))
