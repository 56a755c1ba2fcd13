"""
Building views from a single matrix
===================================

Multiview methods need several views of the same samples. When only one
feature matrix is available, views can be made from random column subsets
or random Gaussian projections, or by cutting the columns into blocks.
"""

import numpy as np

from mvkit.compose import (
    ProjectionSpec,
    SubspaceSpec,
    concat_views,
    random_gaussian_projection,
    random_subspace,
    split_features,
)

rng = np.random.default_rng(0)
X = rng.standard_normal((100, 20))

# %%
# Random subspaces: each view keeps 8 distinct columns. Views may share columns.
ds = random_subspace(X, SubspaceSpec(n_views=3, subset_size=8, seed=1))
for v, names in enumerate(ds.feature_names):
    print(f"view {v}: columns {', '.join(names)}")

# %%
# Gaussian projections preserve squared distances on average.
proj = random_gaussian_projection(X, ProjectionSpec(n_views=2, n_components=64, seed=1))
d0 = np.sum((X[0] - X[1]) ** 2)
print("original distance^2:", round(d0, 2))
print("projected:", [round(float(np.sum((V[0] - V[1]) ** 2)), 2) for V in proj])

# %%
# Splitting and concatenating are inverses.
blocks = split_features(X, [5, 12])
print("block widths:", blocks.n_features)
assert np.array_equal(concat_views(blocks), X)
