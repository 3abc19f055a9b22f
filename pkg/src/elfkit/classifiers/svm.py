"""Linear one-vs-rest SVM trained by stochastic subgradient descent.

Pegasos-style schedule: step size 1/(lambda*t) with the usual lazily
scaled weight vector so per-sample cost stays proportional to the number
of present words. Margins are turned into pseudo-probabilities with a
softmax; they are not calibrated, and reports downstream flag them as
such.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .base import (
    EmptyTrainingError,
    SingleClassError,
    check_binary_csr,
    encode_labels,
    softmax,
)

__all__ = ["LinearSvmClassifier"]


class LinearSvmClassifier(ClassifierMixin, BaseEstimator):
    """Linear hinge-loss classifier, one weight vector per class.

    Parameters
    ----------
    epochs : int, default=20
    regularization : float, default=1e-4
        L2 penalty on the weight vectors (biases are unpenalized).
    seed : int, default=0
        Drives the per-epoch sample shuffle.
    """

    def __init__(self, epochs: int = 20, regularization: float = 1e-4, seed: int = 0):
        self.epochs = epochs
        self.regularization = regularization
        self.seed = seed

    def fit(self, X, y):
        if self.epochs < 1 or self.regularization <= 0:
            raise ValueError("epochs must be >= 1 and regularization positive")
        X = check_binary_csr(X)
        n, d = X.shape
        if n == 0:
            raise EmptyTrainingError("no training samples")
        if n != len(y):
            raise ValueError("X and y length mismatch")
        classes, codes = encode_labels(y)
        k = len(classes)
        if k < 2:
            raise SingleClassError("need at least two classes")

        rng = np.random.default_rng(self.seed)
        lam = self.regularization
        raw = np.zeros((k, d))  # true weights are scale * raw
        bias = np.zeros(k)
        scale = 1.0
        t = 0
        klass = np.arange(k)
        for _ in range(self.epochs):
            order = rng.permutation(n)
            for i in order:
                t += 1
                eta = 1.0 / (lam * t)
                idx = X.indices[X.indptr[i]: X.indptr[i + 1]]
                signs = np.where(klass == codes[i], 1.0, -1.0)
                margins = scale * raw[:, idx].sum(axis=1) + bias
                violated = signs * margins < 1.0
                if t > 1:  # at t == 1 the shrink factor is 0 and weights are 0 anyway
                    scale *= 1.0 - eta * lam
                if violated.any():
                    step = eta * signs[violated]
                    if idx.size:
                        raw[np.ix_(violated, idx)] += (step / scale)[:, None]
                    bias[violated] += step

        self.classes_ = classes
        self.coef_ = scale * raw
        self.intercept_ = bias
        self.n_features_in_ = d
        return self

    def decision_function(self, X) -> np.ndarray:
        X = check_binary_csr(X, n_features=self.n_features_in_)
        return X @ self.coef_.T + self.intercept_

    def predict(self, X) -> np.ndarray:
        return self.classes_[np.argmax(self.decision_function(X), axis=1)]

    def predict_proba(self, X) -> np.ndarray:
        return softmax(self.decision_function(X))
