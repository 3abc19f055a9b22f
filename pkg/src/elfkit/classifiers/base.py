"""Shared plumbing for the bag-of-words classifiers.

All classifiers consume binary CSR matrices (or ``BowVector`` lists) and
string class labels. Labels are kept sorted ascending everywhere, so a
first-occurrence argmax/argmin automatically breaks ties toward the
lexicographically smallest ELF code.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse

from ..vectorizer import BowVector, bow_to_csr

__all__ = [
    "EmptyTrainingError",
    "SingleClassError",
    "check_binary_csr",
    "encode_labels",
    "derive_child_seeds",
    "softmax",
]


class EmptyTrainingError(ValueError):
    pass


class SingleClassError(ValueError):
    pass


def check_binary_csr(X, n_features: int | None = None) -> sparse.csr_matrix:
    """Coerce input to a binary float64 CSR matrix.

    Accepts a CSR/any scipy sparse matrix, a dense array, or a sequence of
    ``BowVector``. Nonzero entries are binarized to 1.0; duplicate indices
    within a row collapse.
    """
    if isinstance(X, (list, tuple)) and (not X or isinstance(X[0], BowVector)):
        X = bow_to_csr(X, dimension=n_features if n_features is not None or X else 0)
    if sparse.issparse(X):
        X = X.tocsr().astype(np.float64)
    else:
        X = sparse.csr_matrix(np.asarray(X, dtype=np.float64))
    X.sum_duplicates()
    if X.nnz and not np.all(X.data == 1.0):
        X = X.copy()
        X.data = np.ones_like(X.data)
    if n_features is not None and X.shape[1] != n_features:
        raise ValueError(f"expected {n_features} features, got {X.shape[1]}")
    return X


def encode_labels(y) -> tuple[np.ndarray, np.ndarray]:
    """Return (sorted unique labels, integer codes)."""
    y = np.asarray(y, dtype=object)
    classes, codes = np.unique(y, return_inverse=True)
    return classes, codes.astype(np.int64)


def derive_child_seeds(seed: int, n: int) -> list[np.random.SeedSequence]:
    """Independent child seeds via a fixed splitting scheme.

    Children are a pure function of (seed, index), so work parallelized
    across them stays reproducible regardless of scheduling.
    """
    return np.random.SeedSequence(seed).spawn(n)


def softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)
