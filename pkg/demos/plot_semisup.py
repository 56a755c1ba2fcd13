"""
Co-training with few labels
===========================

Blum-Mitchell co-training lets two per-view classifiers label confident
unlabeled samples for each other. COREG does the same for regression with
two nearest-neighbor regressors. Unlabeled entries of ``y`` are ``nan``.
"""

import numpy as np

from mvkit.core import accuracy, rmse
from mvkit.semisup import CTClassifier, CTRegressor

rng = np.random.default_rng(0)
n, n_test = 1000, 500
y_all = rng.integers(2, size=n + n_test)
shift = np.array([1.5, 1.5, 0, 0, 0])
views = [rng.standard_normal((n + n_test, 5)) + np.outer(2 * y_all - 1, shift) / 2 for _ in range(2)]
train, test = [V[:n] for V in views], [V[n:] for V in views]

y = y_all[:n].astype(float)
hidden = rng.random(n) > 0.05
y[hidden] = np.nan
print("labeled samples:", int((~hidden).sum()))

# %%
clf = CTClassifier(seed=0).fit(train, y)
print("rounds:", clf.n_rounds_, "labeled after co-training:", len(clf.labeled_indices_))
print("test accuracy:", accuracy(y_all[n:], clf.predict(test)))

# %%
# Regression on a sine curve: 10 labeled points, 200 unlabeled.
x = rng.uniform(-3, 3, 710)
t = np.sin(x) + rng.normal(0, 0.1, 710)
reg_views = [x[:, None], np.column_stack([x, rng.normal(0, 0.3, 710)])]
y_reg = t[:210].copy()
y_reg[10:] = np.nan
train_r = [V[:210] for V in reg_views]
test_r = [V[210:] for V in reg_views]
co = CTRegressor(seed=0).fit(train_r, y_reg)
base = CTRegressor().fit([V[:10] for V in train_r], y_reg[:10])
print("COREG RMSE    :", round(rmse(t[210:], co.predict(test_r)), 3))
print("labeled only  :", round(rmse(t[210:], base.predict(test_r)), 3))
