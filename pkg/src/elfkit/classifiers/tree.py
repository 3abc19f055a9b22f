"""CART decision trees over binary word-presence features.

A split asks one question: does the name contain word ``j``? Nodes grow
until pure or until no split strictly reduces Gini impurity. Split
quality is compared in exact integer arithmetic (minimizing the weighted
child Gini is equivalent to maximizing ``sum(c_L^2)/n_L + sum(c_R^2)/n_R``,
a ratio of integers), so ties genuinely are ties and always break toward
the lowest feature index, on every platform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .base import EmptyTrainingError, check_binary_csr, encode_labels

__all__ = ["DecisionTreeWordClassifier"]

# Exact-integer split scoring holds while counts^2 * n fits in a float64
# mantissa, i.e. up to ~200k training samples per tree.
_NEAR_TIE_RTOL = 1e-9


@dataclass
class _TreeArrays:
    """Flat node-array representation of one grown tree."""

    feature: np.ndarray        # int64, -1 at leaves
    child_absent: np.ndarray   # int64 node index
    child_present: np.ndarray  # int64 node index
    counts_index: np.ndarray   # int64 row into leaf_counts, -1 internal
    leaf_counts: np.ndarray    # (n_leaves, n_classes) float64 class counts

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def leaf_probabilities(self) -> np.ndarray:
        """Per-leaf class distributions, computed once and cached."""
        cached = getattr(self, "_leaf_probabilities", None)
        if cached is None:
            cached = self.leaf_counts / self.leaf_counts.sum(axis=1, keepdims=True)
            self._leaf_probabilities = cached
        return cached

    def leaf_for(self, present: "set[int] | frozenset[int]") -> int:
        node = 0
        while self.feature[node] >= 0:
            if self.feature[node] in present:
                node = self.child_present[node]
            else:
                node = self.child_absent[node]
        return int(node)

    def decision_path_features(self, present) -> list[int]:
        node, feats = 0, []
        while self.feature[node] >= 0:
            feats.append(int(self.feature[node]))
            if self.feature[node] in present:
                node = self.child_present[node]
            else:
                node = self.child_absent[node]
        return feats

    def leaf_distribution(self, present) -> np.ndarray:
        return self.leaf_probabilities()[self.counts_index[self.leaf_for(present)]]


def _sample_feature_set(rng: np.random.Generator, d: int, m: int) -> np.ndarray:
    """m distinct feature indices, uniform without replacement, sorted."""
    chosen = np.empty(0, dtype=np.int64)
    need = m
    while need > 0:
        draw = rng.integers(0, d, size=2 * need + 8)
        draw = draw[~np.isin(draw, chosen)]
        uniq, first = np.unique(draw, return_index=True)
        fresh = uniq[np.argsort(first)][:need]
        chosen = np.concatenate([chosen, fresh])
        need = m - len(chosen)
    return np.sort(chosen)


def _best_split(X, codes, rows, total_counts, n_classes, rng, feature_subsample):
    """Best (feature, present-row mask) at a node, or None.

    None means no candidate feature varies within the node or none
    strictly improves on the parent's impurity.
    """
    n = len(rows)
    sub = X[rows]
    cols = sub.indices
    if cols.size == 0:
        return None
    row_of = np.repeat(np.arange(n), np.diff(sub.indptr))
    y_nnz = codes[rows][row_of]

    if feature_subsample is not None and feature_subsample < X.shape[1]:
        candidates = _sample_feature_set(rng, X.shape[1], feature_subsample)
        keep = np.isin(cols, candidates)
        cols, y_nnz, row_of = cols[keep], y_nnz[keep], row_of[keep]
        if cols.size == 0:
            return None

    uniq, inverse = np.unique(cols, return_inverse=True)
    per_feature = np.bincount(
        inverse * n_classes + y_nnz, minlength=len(uniq) * n_classes
    ).reshape(len(uniq), n_classes).astype(np.float64)
    n_present = per_feature.sum(axis=1)
    varies = n_present < n  # presence count > 0 is guaranteed
    if not varies.any():
        return None

    absent_counts = total_counts[None, :].astype(np.float64) - per_feature
    n_absent = n - n_present
    numer = (per_feature**2).sum(axis=1) * n_absent + (absent_counts**2).sum(axis=1) * n_present
    denom = n_present * n_absent
    with np.errstate(divide="ignore", invalid="ignore"):
        quality = np.where(varies, numer / denom, -np.inf)

    q_max = quality.max()
    near = np.flatnonzero(quality >= q_max - _NEAR_TIE_RTOL * max(1.0, abs(q_max)))
    best = None
    best_num = best_den = 0
    for i in near:  # uniq is sorted, so this scans features ascending
        if not varies[i]:
            continue
        num_i, den_i = int(round(numer[i])), int(round(denom[i]))
        if best is None or num_i * best_den > best_num * den_i:
            best, best_num, best_den = int(i), num_i, den_i
    parent_num = int((total_counts.astype(np.int64) ** 2).sum())
    if best is None or best_num * n <= parent_num * best_den:
        return None

    feature = int(uniq[best])
    present_mask = np.zeros(n, dtype=bool)
    present_mask[row_of[cols == feature]] = True
    return feature, present_mask


def grow_tree(X, codes, n_classes, rng=None, feature_subsample=None) -> _TreeArrays:
    """Grow one tree; depth-first, present branch first."""
    feature: list[int] = []
    child_absent: list[int] = []
    child_present: list[int] = []
    counts_index: list[int] = []
    leaf_counts: list[np.ndarray] = []

    def new_node() -> int:
        feature.append(-1)
        child_absent.append(-1)
        child_present.append(-1)
        counts_index.append(-1)
        return len(feature) - 1

    stack = [(new_node(), np.arange(X.shape[0], dtype=np.int64))]
    while stack:
        node, rows = stack.pop()
        counts = np.bincount(codes[rows], minlength=n_classes)
        split = None
        if counts.max() < len(rows):  # impure
            split = _best_split(X, codes, rows, counts, n_classes, rng, feature_subsample)
        if split is None:
            counts_index[node] = len(leaf_counts)
            leaf_counts.append(counts.astype(np.float64))
            continue
        feat, present_mask = split
        feature[node] = feat
        child_absent[node] = new_node()
        child_present[node] = new_node()
        stack.append((child_absent[node], rows[~present_mask]))
        stack.append((child_present[node], rows[present_mask]))

    return _TreeArrays(
        feature=np.asarray(feature, dtype=np.int64),
        child_absent=np.asarray(child_absent, dtype=np.int64),
        child_present=np.asarray(child_present, dtype=np.int64),
        counts_index=np.asarray(counts_index, dtype=np.int64),
        leaf_counts=np.vstack(leaf_counts) if leaf_counts else np.zeros((0, n_classes)),
    )


def rows_as_sets(X) -> list[frozenset]:
    X = X.tocsr()
    return [
        frozenset(X.indices[X.indptr[i]: X.indptr[i + 1]].tolist())
        for i in range(X.shape[0])
    ]


class DecisionTreeWordClassifier(ClassifierMixin, BaseEstimator):
    """Single CART tree on word-presence features.

    Parameters
    ----------
    feature_subsample : int or None, default=None
        Candidate features drawn per split; None evaluates every feature
        that varies within the node.
    seed : int or numpy SeedSequence, default=0
        Only consumed when ``feature_subsample`` is set.
    """

    def __init__(self, feature_subsample: int | None = None, seed=0):
        self.feature_subsample = feature_subsample
        self.seed = seed

    def fit(self, X, y):
        X = check_binary_csr(X)
        if X.shape[0] == 0:
            raise EmptyTrainingError("no training samples")
        if X.shape[0] != len(y):
            raise ValueError("X and y length mismatch")
        classes, codes = encode_labels(y)
        rng = np.random.default_rng(self.seed)
        self.classes_ = classes
        self.tree_ = grow_tree(
            X, codes, len(classes), rng=rng, feature_subsample=self.feature_subsample
        )
        self.n_features_in_ = X.shape[1]
        return self

    def predict_proba(self, X) -> np.ndarray:
        X = check_binary_csr(X, n_features=self.n_features_in_)
        return np.vstack(
            [self.tree_.leaf_distribution(s) for s in rows_as_sets(X)]
        )

    def predict(self, X) -> np.ndarray:
        return self.classes_[np.argmax(self.predict_proba(X), axis=1)]
