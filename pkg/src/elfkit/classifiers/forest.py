"""Random forest of word-presence CART trees.

Each tree trains on a bootstrap resample with sqrt(d) candidate features
per split; prediction averages the per-tree leaf distributions. Per-tree
seeds derive from the master seed through a fixed splitting scheme, so
results are identical whether trees are grown sequentially or in a
worker pool.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from functools import partial

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .base import EmptyTrainingError, check_binary_csr, derive_child_seeds, encode_labels
from .tree import grow_tree, rows_as_sets

__all__ = ["RandomForestWordClassifier"]


def _fit_one_tree(X, codes, n_classes, bootstrap, feature_subsample, seed_seq):
    rng = np.random.default_rng(seed_seq)
    if bootstrap:
        rows = rng.integers(0, X.shape[0], size=X.shape[0])
        X, codes = X[rows], codes[rows]
    return grow_tree(X, codes, n_classes, rng=rng, feature_subsample=feature_subsample)


class RandomForestWordClassifier(ClassifierMixin, BaseEstimator):
    """Bootstrap-aggregated word-presence trees.

    Parameters
    ----------
    n_trees : int, default=100
    seed : int, default=0
    bootstrap : bool, default=True
        Test hook; with False every tree sees the full training set and a
        single-tree forest reduces exactly to one feature-subsampled tree.
    n_jobs : int, default=1
        Trees grown concurrently in a process pool when > 1.
    """

    def __init__(self, n_trees: int = 100, seed: int = 0, bootstrap: bool = True, n_jobs: int = 1):
        self.n_trees = n_trees
        self.seed = seed
        self.bootstrap = bootstrap
        self.n_jobs = n_jobs

    def fit(self, X, y):
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        X = check_binary_csr(X)
        if X.shape[0] == 0:
            raise EmptyTrainingError("no training samples")
        if X.shape[0] != len(y):
            raise ValueError("X and y length mismatch")
        classes, codes = encode_labels(y)
        feature_subsample = max(1, math.isqrt(X.shape[1])) if X.shape[1] else 1
        seeds = derive_child_seeds(self.seed, self.n_trees)
        fit_seed = partial(
            _fit_one_tree, X, codes, len(classes), self.bootstrap, feature_subsample
        )
        if self.n_jobs > 1:
            with ProcessPoolExecutor(max_workers=self.n_jobs) as pool:
                self.trees_ = list(pool.map(fit_seed, seeds, chunksize=4))
        else:
            self.trees_ = [fit_seed(s) for s in seeds]
        self.classes_ = classes
        self.n_features_in_ = X.shape[1]
        return self

    def predict_proba(self, X) -> np.ndarray:
        X = check_binary_csr(X, n_features=self.n_features_in_)
        sets = rows_as_sets(X)
        proba = np.zeros((len(sets), len(self.classes_)))
        for tree in self.trees_:
            leaves = np.fromiter(
                (tree.leaf_for(present) for present in sets), dtype=np.int64, count=len(sets)
            )
            proba += tree.leaf_probabilities()[tree.counts_index[leaves]]
        return proba / len(self.trees_)

    def predict(self, X) -> np.ndarray:
        return self.classes_[np.argmax(self.predict_proba(X), axis=1)]
