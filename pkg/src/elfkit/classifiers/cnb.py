"""Complement naive Bayes on binary word-presence features.

For each class the word statistics of *all other* classes are pooled,
smoothed, log-transformed and L1-normalized per class; a sample is
assigned to the class whose complement matches it least. The complement
formulation keeps per-class parameter estimates stable when class sizes
are wildly imbalanced, which legal-form data always is.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse
from sklearn.base import BaseEstimator, ClassifierMixin

from .base import EmptyTrainingError, check_binary_csr, encode_labels, softmax

__all__ = ["ComplementNaiveBayes"]


class ComplementNaiveBayes(ClassifierMixin, BaseEstimator):
    """Complement naive Bayes with weight normalization.

    Parameters
    ----------
    alpha : float, default=1.0
        Additive smoothing applied to complement counts.

    Attributes
    ----------
    classes_ : ndarray of str
        Sorted class labels.
    feature_weights_ : ndarray of shape (n_classes, n_features)
        Per-class L1-normalized complement log weights (non-positive).
        Prediction is the argmin of the summed weights of the present
        features; with all-zero input every class scores 0 and the tie
        resolves to the first (smallest) label.
    """

    def __init__(self, alpha: float = 1.0):
        self.alpha = alpha

    def fit(self, X, y):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        X = check_binary_csr(X)
        if X.shape[0] == 0:
            raise EmptyTrainingError("no training samples")
        if X.shape[0] != len(y):
            raise ValueError("X and y length mismatch")
        classes, codes = encode_labels(y)
        n, d = X.shape
        k = len(classes)

        onehot = sparse.csr_matrix(
            (np.ones(n), (np.arange(n), codes)), shape=(n, k)
        )
        counts = np.asarray((onehot.T @ X).todense())  # (k, d) presence counts
        complement = counts.sum(axis=0, keepdims=True) - counts
        smoothed = self.alpha + complement
        theta = smoothed / smoothed.sum(axis=1, keepdims=True)
        log_theta = np.log(theta)
        norm = np.abs(log_theta).sum(axis=1, keepdims=True)
        # d == 1 degenerates to theta == 1 exactly; weights stay zero.
        with np.errstate(invalid="ignore"):
            weights = np.where(norm > 0, log_theta / norm, 0.0)

        self.classes_ = classes
        self.feature_weights_ = weights
        self.n_features_in_ = d
        return self

    def decision_scores(self, X) -> np.ndarray:
        """Summed complement weights per class; lower is better."""
        X = check_binary_csr(X, n_features=self.n_features_in_)
        return X @ self.feature_weights_.T

    def predict(self, X) -> np.ndarray:
        scores = self.decision_scores(X)
        return self.classes_[np.argmin(scores, axis=1)]

    def predict_proba(self, X) -> np.ndarray:
        return softmax(-self.decision_scores(X))
