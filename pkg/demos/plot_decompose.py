"""
Joint and individual structure, group PCA and group ICA
=======================================================

AJIVE splits each view into a part shared with the other view, a
view-specific part and noise. Group PCA and group ICA reduce each view
first and then analyse the concatenation.
"""

import numpy as np

from mvkit.decompose import AjiveParams, ajive_fit, amari_distance, group_ica_fit, group_pca_fit_transform

rng = np.random.default_rng(0)
n = 200
Q, _ = np.linalg.qr(rng.standard_normal((n, 4)))
views = []
for v, d in enumerate((50, 40)):
    shared = Q[:, :2] @ np.diag([10.0, 8.0]) @ np.linalg.qr(rng.standard_normal((d, 2)))[0].T
    own = 6.0 * Q[:, 2 + v:3 + v] @ np.linalg.qr(rng.standard_normal((d, 1)))[0].T
    views.append(shared + own + 0.05 * rng.standard_normal((n, d)))

# %%
res = ajive_fit(views, AjiveParams((3, 3), n_resamples=100, seed=0))
print("joint rank:", res.joint_rank, "individual ranks:", res.individual_ranks)
print(f"thresholds: wedin {res.wedin_threshold:.3f}, random {res.random_threshold:.3f} ({res.binding_bound} binds)")
X0 = views[0] - res.means[0]
print("identity error:", np.abs(X0 - res.joint[0] - res.individual[0] - res.noise[0]).max())

# %%
# Group PCA scores are orthogonal.
gp = group_pca_fit_transform(views, [3, 3], 3)
print("group PCA singular values:", np.round(gp.singular_values, 2))

# %%
# Group ICA on three Laplace sources mixed into two views.
S = rng.laplace(size=(2000, 3))
A = [rng.standard_normal((3, 8)), rng.standard_normal((3, 6))]
ica = group_ica_fit([S @ A[0], S @ A[1]], [3, 3], 3, seed=0)
print("converged:", ica.converged, "in", ica.n_iter, "iterations")
print("Amari distance to the true unmixing:", round(amari_distance(ica.unmixing, np.hstack(A).T), 4))
