"""Two-view co-training for classification and regression.

Unlabeled samples are marked with ``nan`` (:data:`mvkit.core.UNLABELED`)
in the label vector.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .core import BaseMultiview, check_widths, is_unlabeled, make_rng, validate_views
from .exceptions import BadParams, NoLabeled, NotBinary


# -- bundled base learners -------------------------------------------------


class LogisticRegression:
    """L2-penalized binary logistic regression fitted with L-BFGS.

    Any learner with ``fit(X, y)`` and ``predict_proba(X)`` can replace it.
    """

    def __init__(self, C=1.0, max_iter=200):
        self.C = C
        self.max_iter = max_iter

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y)
        self.classes_ = np.unique(y)
        if len(self.classes_) != 2:
            raise NotBinary(f"expected two classes, got {len(self.classes_)}")
        t = (y == self.classes_[1]).astype(float)
        self._mu = X.mean(axis=0)
        sd = X.std(axis=0)
        self._sd = np.where(sd > 0, sd, 1.0)
        Z = (X - self._mu) / self._sd
        d = Z.shape[1]

        def loss(theta):
            w, b = theta[:d], theta[d]
            m = Z @ w + b
            # log(1 + exp(m)) - t m, stable
            val = np.logaddexp(0.0, m).sum() - t @ m + 0.5 / self.C * w @ w
            p = 0.5 * (1.0 + np.tanh(0.5 * m))
            g = np.empty(d + 1)
            g[:d] = Z.T @ (p - t) + w / self.C
            g[d] = (p - t).sum()
            return val, g

        res = optimize.minimize(
            loss, np.zeros(d + 1), jac=True, method="L-BFGS-B",
            options={"maxiter": self.max_iter},
        )
        self.coef_ = res.x[:d] / self._sd
        self.intercept_ = res.x[d] - self._mu @ self.coef_
        return self

    def decision_function(self, X):
        return np.asarray(X, dtype=float) @ self.coef_ + self.intercept_

    def predict_proba(self, X):
        p1 = 0.5 * (1.0 + np.tanh(0.5 * self.decision_function(X)))
        return np.column_stack([1.0 - p1, p1])

    def predict(self, X):
        return self.classes_[(self.predict_proba(X)[:, 1] > 0.5).astype(int)]


class KNeighborsRegressor:
    """Mean target of the ``n_neighbors`` nearest training rows under the
    Minkowski distance of order ``p``. Ties go to the lower training index."""

    def __init__(self, n_neighbors=3, p=2):
        self.n_neighbors = n_neighbors
        self.p = p

    def fit(self, X, y):
        self._X = np.asarray(X, dtype=float)
        self._y = np.asarray(y, dtype=float)
        return self

    def kneighbors(self, X, n_neighbors=None):
        k = min(n_neighbors or self.n_neighbors, len(self._X))
        X = np.asarray(X, dtype=float)
        D = (np.abs(X[:, None, :] - self._X[None, :, :]) ** self.p).sum(axis=2)
        return np.argsort(D, axis=1, kind="stable")[:, :k]

    def predict(self, X):
        return self._y[self.kneighbors(X)].mean(axis=1)


def _clone(est):
    try:
        from sklearn.base import clone
    except ImportError:  # pragma: no cover
        return copy.deepcopy(est)
    try:
        return clone(est)
    except TypeError:
        return copy.deepcopy(est)


def _split_labels(y, n):
    if y is None:
        raise NoLabeled("co-training needs a label vector")
    y = np.asarray(y, dtype=float)
    if y.shape[0] != n:
        raise BadParams(f"y has {y.shape[0]} entries for {n} samples")
    unl = is_unlabeled(y)
    return y, np.flatnonzero(~unl), np.flatnonzero(unl)


# -- classifier --------------------------------------------------------------


@dataclass
class RoundTrace:
    round: int
    added: int
    pool_refill: int


class CTClassifier(BaseMultiview):
    """Blum-Mitchell co-training classifier for two views and two classes.

    Each round both learners are trained on the current labeled set; each
    one labels its ``p`` most confident positive and ``n`` most confident
    negative members of a random pool of unlabeled samples. The newly
    labeled samples are shared by both views and the pool is refilled.

    Parameters
    ----------
    estimator1, estimator2 : classifier, optional
        Must implement ``fit`` and ``predict_proba``. Defaults to
        :class:`LogisticRegression`.
    p, n : int, default=1
        Positives and negatives labeled per learner per round.
    unlabeled_pool_size : int, default=75
    max_rounds : int, default=30
    seed : int, default=0

    Attributes
    ----------
    estimators_ : list
        The two fitted learners.
    classes_ : ndarray
    labeled_indices_ : ndarray
        Initially labeled samples followed by the ones added in order.
    trace_ : list of RoundTrace
    """

    def __init__(
        self,
        estimator1=None,
        estimator2=None,
        p=1,
        n=1,
        unlabeled_pool_size=75,
        max_rounds=30,
        seed=0,
    ):
        self.estimator1 = estimator1
        self.estimator2 = estimator2
        self.p = p
        self.n = n
        self.unlabeled_pool_size = unlabeled_pool_size
        self.max_rounds = max_rounds
        self.seed = seed

    def fit(self, Xs, y):
        ds = validate_views(Xs, require_k=2)
        if self.p < 1 or self.n < 1 or self.unlabeled_pool_size < self.p + self.n:
            raise BadParams("need p >= 1, n >= 1 and unlabeled_pool_size >= p + n")
        y, lab, unl = _split_labels(y, ds.n_samples)
        classes = np.unique(y[lab])
        if len(classes) > 2:
            raise NotBinary(f"co-training supports two classes, found {len(classes)}")
        if len(classes) < 2:
            raise NoLabeled("each of the two classes needs at least one labeled sample")
        self.classes_ = classes
        target = np.full(ds.n_samples, -1, dtype=int)
        target[lab] = (y[lab] == classes[1]).astype(int)

        rng = make_rng(self.seed, 0)
        rest = list(rng.permutation(unl))
        pool = rest[: self.unlabeled_pool_size]
        rest = rest[self.unlabeled_pool_size:]
        labeled = list(lab)
        ests = [self.estimator1, self.estimator2]
        ests = [LogisticRegression() if e is None else e for e in ests]
        self.trace_ = []

        rnd = 0
        while rnd < self.max_rounds and pool:
            fitted = [_clone(e).fit(X[labeled], target[labeled]) for e, X in zip(ests, ds)]
            chosen = {}
            idx = np.asarray(pool)
            for h, X in zip(fitted, ds):
                prob = _positive_proba(h, X[idx])
                taken = 0
                for j in np.argsort(-prob, kind="stable"):
                    if taken == self.p:
                        break
                    if idx[j] not in chosen:
                        chosen[idx[j]] = 1
                        taken += 1
                taken = 0
                for j in np.argsort(prob, kind="stable"):
                    if taken == self.n:
                        break
                    if idx[j] not in chosen:
                        chosen[idx[j]] = 0
                        taken += 1
            for i, lbl in chosen.items():
                target[i] = lbl
                labeled.append(int(i))
            pool = [i for i in pool if i not in chosen]
            refill = rest[: len(chosen)]
            rest = rest[len(chosen):]
            pool.extend(refill)
            rnd += 1
            self.trace_.append(RoundTrace(rnd, len(chosen), len(refill)))

        self.estimators_ = [_clone(e).fit(X[labeled], target[labeled]) for e, X in zip(ests, ds)]
        self.labeled_indices_ = np.asarray(labeled, dtype=int)
        self.assigned_labels_ = classes[target[self.labeled_indices_]]
        self.n_rounds_ = rnd
        self.n_features_in_ = ds.n_features
        return self

    def predict_proba(self, Xs):
        """Arithmetic mean of both learners' class probabilities."""
        self._check_fitted("estimators_")
        ds = validate_views(Xs, require_k=2)
        check_widths(ds, self.n_features_in_)
        probs = []
        for h, X in zip(self.estimators_, ds):
            p1 = _positive_proba(h, X)
            probs.append(np.column_stack([1.0 - p1, p1]))
        return combine_probabilities(probs)

    def predict(self, Xs):
        proba = self.predict_proba(Xs)
        return self.classes_[np.argmax(proba, axis=1)]


def _positive_proba(est, X):
    P = np.asarray(est.predict_proba(X), dtype=float)
    cls = list(getattr(est, "classes_", [0, 1]))
    return P[:, cls.index(1)]


def combine_probabilities(probs):
    """Mean of per-view probability matrices; argmax ties go to class 0."""
    return sum(np.asarray(p, dtype=float) for p in probs) / len(probs)


# -- regressor ---------------------------------------------------------------


class CTRegressor(BaseMultiview):
    """Co-training regression with two nearest-neighbor regressors (COREG).

    Each round, each regressor scores every pool candidate ``x`` by how
    much adding ``(x, h(x))`` reduces its squared error on ``x``'s labeled
    neighbors. The best candidate with a positive score is handed, with the
    pseudo-label, to the other regressor. Training stops when no candidate
    helps or ``max_rounds`` is reached.

    Parameters
    ----------
    estimator1, estimator2 : regressor, optional
        Defaults: 3 neighbors with Minkowski orders 2 and 5. Neighbor sets
        use the estimator's ``n_neighbors`` and ``p`` attributes.
    unlabeled_pool_size : int, default=75
    max_rounds : int, default=100
    seed : int, default=0
    """

    def __init__(
        self,
        estimator1=None,
        estimator2=None,
        unlabeled_pool_size=75,
        max_rounds=100,
        seed=0,
    ):
        self.estimator1 = estimator1
        self.estimator2 = estimator2
        self.unlabeled_pool_size = unlabeled_pool_size
        self.max_rounds = max_rounds
        self.seed = seed

    def fit(self, Xs, y):
        ds = validate_views(Xs, require_k=2)
        y, lab, unl = _split_labels(y, ds.n_samples)
        if len(lab) < 2:
            raise NoLabeled("COREG needs at least two labeled samples")
        if self.unlabeled_pool_size < 1:
            raise BadParams("unlabeled_pool_size must be >= 1")
        ests = [
            KNeighborsRegressor(3, 2) if self.estimator1 is None else self.estimator1,
            KNeighborsRegressor(3, 5) if self.estimator2 is None else self.estimator2,
        ]
        rng = make_rng(self.seed, 0)
        rest = list(rng.permutation(unl))
        pool = rest[: self.unlabeled_pool_size]
        rest = rest[self.unlabeled_pool_size:]
        # per-regressor labeled sets: (indices, targets)
        sets = [(list(lab), list(y[lab])) for _ in range(2)]
        fitted = [_clone(e).fit(X[s[0]], np.asarray(s[1])) for e, X, s in zip(ests, ds, sets)]
        self.trace_ = []

        rnd = 0
        while rnd < self.max_rounds and pool:
            picks = [None, None]
            for j in range(2):
                best = self._best_candidate(ests[j], fitted[j], ds[j], sets[j], pool)
                if best is not None:
                    picks[j] = best
                    pool.remove(best[0])
            rnd += 1
            added = 0
            for j in range(2):
                if picks[j] is not None:
                    other = sets[1 - j]
                    other[0].append(picks[j][0])
                    other[1].append(picks[j][1])
                    added += 1
            self.trace_.append(RoundTrace(rnd, added, 0))
            if added == 0:
                break
            fitted = [_clone(e).fit(X[s[0]], np.asarray(s[1])) for e, X, s in zip(ests, ds, sets)]
            refill = rest[:added]
            rest = rest[added:]
            pool.extend(refill)
            self.trace_[-1].pool_refill = len(refill)

        self.estimators_ = fitted
        self.labeled_sets_ = [np.asarray(s[0], dtype=int) for s in sets]
        self.labeled_indices_ = np.unique(np.concatenate(self.labeled_sets_))
        self.n_rounds_ = rnd
        self.n_features_in_ = ds.n_features
        return self

    @staticmethod
    def _best_candidate(est, h, X, lset, pool):
        idx, tgt = lset
        XL = X[idx]
        yL = np.asarray(tgt)
        k = getattr(est, "n_neighbors", 3)
        p = getattr(est, "p", 2)
        cand = np.asarray(pool)
        yhat = h.predict(X[cand])
        D = (np.abs(X[cand][:, None, :] - XL[None, :, :]) ** p).sum(axis=2)
        nbrs = np.argsort(D, axis=1, kind="stable")[:, : min(k, len(idx))]
        fitL = h.predict(XL)
        before = (yL - fitL) ** 2
        if type(est) is KNeighborsRegressor:
            after = _knn_refit_errors(XL, yL, fitL, X[cand], yhat, nbrs, k, p)
        else:
            after = np.empty(nbrs.shape)
            for c, x_u in enumerate(cand):
                omega = nbrs[c]
                h2 = _clone(est).fit(np.vstack([XL, X[x_u]]), np.append(yL, yhat[c]))
                after[c] = (yL[omega] - h2.predict(XL[omega])) ** 2
        deltas = (before[nbrs] - after).sum(axis=1)
        c = int(np.argmax(deltas))
        if deltas[c] > 0:
            return int(cand[c]), float(yhat[c])
        return None

    def predict(self, Xs):
        """Mean of the two regressors' predictions."""
        self._check_fitted("estimators_")
        ds = validate_views(Xs, require_k=2)
        check_widths(ds, self.n_features_in_)
        return combine_predictions([h.predict(X) for h, X in zip(self.estimators_, ds)])


def _knn_refit_errors(XL, yL, fitL, XC, yhat, nbrs, k, p):
    """Squared errors on each candidate's neighbors after adding the
    candidate to a nearest-neighbor regressor, without refitting.

    The candidate is appended last, so it displaces the current k-th
    neighbor of a training row only when strictly closer.
    """
    k = min(k, len(yL))
    DL = (np.abs(XL[:, None, :] - XL[None, :, :]) ** p).sum(axis=2)
    order = np.argsort(DL, axis=1, kind="stable")[:, :k]
    kth = DL[np.arange(len(yL)), order[:, -1]]
    # sum of targets of the k - 1 nearest
    head = yL[order[:, : k - 1]].sum(axis=1)
    rows = nbrs  # (n_cand, k) training indices
    d_new = (np.abs(XL[rows] - XC[:, None, :]) ** p).sum(axis=2)
    refit = np.where(d_new < kth[rows], (head[rows] + yhat[:, None]) / k, fitL[rows])
    return (yL[rows] - refit) ** 2


def combine_predictions(preds):
    return sum(np.asarray(p, dtype=float) for p in preds) / len(preds)


@dataclass(frozen=True)
class CoTrainParams:
    p: int = 1
    n: int = 1
    pool_size: int = 75
    max_rounds: int = 30
    seed: int = 0


def cotrain_classifier_fit(ds, y, learners=(None, None), params: CoTrainParams = CoTrainParams()):
    return CTClassifier(
        learners[0], learners[1], params.p, params.n, params.pool_size, params.max_rounds, params.seed
    ).fit(ds, y)


def cotrain_classifier_predict(model, ds):
    return model.predict(ds)


def cotrain_regressor_fit(ds, y, learners=(None, None), pool_size=75, max_rounds=100, seed=0):
    return CTRegressor(learners[0], learners[1], pool_size, max_rounds, seed).fit(ds, y)


def cotrain_regressor_predict(model, ds):
    return model.predict(ds)
