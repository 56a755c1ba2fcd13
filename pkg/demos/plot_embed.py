"""
Joint embeddings of two or more views
=====================================

Canonical correlation analysis finds projections of two views that are as
correlated as possible. The multiview variants extend this to any number
of views, to kernels, and to a joint SVD of per-view bases (GCCA). MVMDS
and the omnibus embedding work from distances instead of features.
"""

import tempfile
from pathlib import Path

import numpy as np

from mvkit.datasets import SyntheticSpec, make_latent_views
from mvkit.embed import CCA, GCCA, KMCCA, MCCA, MVMDS, Omnibus
from mvkit.plotting import emit_scatter_svg

ds, latent, _ = make_latent_views(SyntheticSpec(300, 2, (10, 12, 8), noise_sigma=0.5, seed=3))

# %%
# Two-view CCA. Canonical scores have unit variance and paired columns
# correlate exactly at the reported canonical correlations.
cca = CCA(n_components=2).fit(ds[:2])
S1, S2 = cca.transform(ds[:2])
print("canonical correlations:", np.round(cca.canon_corrs_, 4))
print("score correlation check:", round(float(np.corrcoef(S1[:, 0], S2[:, 0])[0, 1]), 4))

# %%
# With two views, SUMCOR multiview CCA and linear kernel CCA agree with CCA.
print("MCCA :", np.round(MCCA(2).fit(ds[:2]).canon_corrs_, 4))
print("KMCCA:", np.round(KMCCA(2, kernel="linear", regularization=1e-6).fit(ds[:2]).canon_corrs_, 4))

# %%
# All three views at once. The leading scores track the shared latent.
scores = MCCA(2).fit(ds).transform(ds)
for v, S in enumerate(scores):
    r = np.abs(np.corrcoef(S[:, 0], latent @ np.linalg.lstsq(latent, S[:, 0], rcond=None)[0])[0, 1])
    print(f"view {v}: latent fit of first score = {r:.3f}")

# %%
# GCCA returns one joint representation for every view.
g = GCCA(n_components=2).fit(ds)
print("GCCA per-view ranks:", g.ranks_, "singular values:", np.round(g.singular_values_, 3))

# %%
# Distance-based embeddings.
common = MVMDS(2).fit_transform(ds)
blocks = Omnibus(2).fit_transform(ds[:2])
print("MVMDS columns orthonormal:", np.allclose(common.T @ common, np.eye(2)))
print("omnibus block shapes:", [Z.shape for Z in blocks])

out = Path(tempfile.mkdtemp()) / "cca_scores.svg"
emit_scatter_svg(np.column_stack([S1[:, 0], S2[:, 0], S1[:, 1]]), path=out)
print("wrote", out)
