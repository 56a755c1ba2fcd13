"""Shared generators and independent oracles for the test suite."""

import numpy as np
import pytest
from scipy import linalg


def principal_angles(A, B):
    """Principal angles (radians) between the column spans of A and B."""
    return linalg.subspace_angles(np.asarray(A, float), np.asarray(B, float))


def njw_spectral_oracle(X, k, gamma=None, seed=0):
    """Plain normalized spectral clustering (rbf, median gamma) with sklearn k-means."""
    from sklearn.cluster import KMeans

    D = ((X[:, None, :] - X[None, :, :]) ** 2).sum(axis=2)
    if gamma is None:
        gamma = 1.0 / np.median(D[np.triu_indices(len(X), 1)])
    W = np.exp(-gamma * D)
    d = W.sum(axis=1)
    L = W / np.sqrt(np.outer(d, d))
    _, vecs = np.linalg.eigh(L)
    U = vecs[:, -k:]
    U = U / np.linalg.norm(U, axis=1, keepdims=True)
    return KMeans(k, n_init=10, random_state=seed).fit_predict(U)


def two_view_classification(seed, n=1000, n_test=500, d=5, shift=1.5, frac=0.05):
    """Conditionally independent two-view task: each view alone is sufficient."""
    rng = np.random.default_rng(seed)
    total = n + n_test
    y = rng.integers(2, size=total)
    mu = np.zeros(d)
    mu[:2] = shift
    views = [rng.standard_normal((total, d)) + np.outer(2 * y - 1, mu) / 2 for _ in range(2)]
    y_train = y[:n].astype(float)
    labeled = np.zeros(n, dtype=bool)
    labeled[rng.choice(n, max(2, int(frac * n)), replace=False)] = True
    # make sure both classes are labeled
    for c in (0, 1):
        if not np.any(labeled & (y[:n] == c)):
            labeled[np.flatnonzero(y[:n] == c)[0]] = True
    y_train[~labeled] = np.nan
    train = [V[:n] for V in views]
    test = [V[n:] for V in views]
    return train, y_train, test, y[n:], labeled


def sine_regression(seed, n_labeled=10, n_unlabeled=200, n_test=500):
    rng = np.random.default_rng(100 + seed)
    total = n_labeled + n_unlabeled + n_test
    x = rng.uniform(-3, 3, total)
    y = np.sin(x) + rng.normal(0, 0.1, total)
    views = [x[:, None], np.column_stack([x, rng.normal(0, 0.3, total)])]
    m = n_labeled + n_unlabeled
    y_train = y[:m].copy()
    y_train[n_labeled:] = np.nan
    return [V[:m] for V in views], y_train, [V[m:] for V in views], y[m:]


def ajive_synthetic(seed, n=200, dims=(50, 40), sigma=0.05):
    """Shared rank-2 signal plus a rank-1 individual signal per view."""
    rng = np.random.default_rng(seed)
    Q, _ = np.linalg.qr(rng.standard_normal((n, 4)))
    views = []
    for v, d in enumerate(dims):
        load = np.linalg.qr(rng.standard_normal((d, 2)))[0].T
        ind = np.linalg.qr(rng.standard_normal((d, 1)))[0].T
        J = Q[:, :2] @ np.diag([10.0, 8.0]) @ load
        I = Q[:, 2 + v:3 + v] * 6.0 @ ind
        views.append(J + I + sigma * rng.standard_normal((n, d)))
    return views


def laplace_mixture(seed, n=2000, dims=(8, 6), m=3):
    rng = np.random.default_rng(seed)
    S = rng.laplace(size=(n, m))
    A = [rng.standard_normal((m, d)) for d in dims]
    return [S @ Av for Av in A], S, A


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# -- acceptance reporting ------------------------------------------------------

ACCEPTANCE_LINES = {}


def record_criterion(number, title, passed, detail):
    line = f"criterion {number:>2} {'PASS' if passed else 'FAIL'}: {title} ({detail})"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
