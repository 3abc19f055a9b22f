import math

import numpy as np
import pytest

from elfkit.classifiers import (
    DecisionTreeWordClassifier,
    EmptyTrainingError,
    RandomForestWordClassifier,
    derive_child_seeds,
)
from elfkit.vectorizer import BowVector


def as_bow(samples, n_features):
    return [BowVector(tuple(sorted(s)), n_features) for s in samples]


def toy_instance(seed=23, n=60, d=9, k=3):
    rng = np.random.default_rng(seed)
    samples = []
    labels = []
    for _ in range(n):
        cls = int(rng.integers(0, k))
        # class-specific marker word plus noise words
        feats = {cls} | set((3 + np.flatnonzero(rng.integers(0, 2, d - 3))).tolist())
        samples.append(feats)
        labels.append(f"C{cls}")
    return samples, labels


class TestReduction:
    def test_single_tree_no_bootstrap_equals_plain_tree(self):
        samples, labels = toy_instance()
        X = as_bow(samples, 9)
        forest = RandomForestWordClassifier(n_trees=1, bootstrap=False, seed=42).fit(X, labels)
        tree_seed = derive_child_seeds(42, 1)[0]
        tree = DecisionTreeWordClassifier(
            feature_subsample=max(1, math.isqrt(9)), seed=tree_seed
        ).fit(X, labels)
        np.testing.assert_array_equal(forest.trees_[0].feature, tree.tree_.feature)
        np.testing.assert_array_equal(forest.trees_[0].leaf_counts, tree.tree_.leaf_counts)
        assert forest.predict(X).tolist() == tree.predict(X).tolist()


class TestBehavior:
    def test_pure_label_probability_one(self):
        model = RandomForestWordClassifier(n_trees=5, seed=1).fit(as_bow([{0}, {1}], 2), ["A", "A"])
        proba = model.predict_proba(as_bow([{0}, {}, {0, 1}], 2))
        np.testing.assert_allclose(proba, 1.0)

    def test_separable_toy_reaches_full_train_accuracy(self):
        samples, labels = toy_instance()
        X = as_bow(samples, 9)
        model = RandomForestWordClassifier(n_trees=100, seed=0).fit(X, labels)
        assert model.predict(X).tolist() == labels

    def test_deterministic_across_runs(self):
        samples, labels = toy_instance(seed=5)
        X = as_bow(samples, 9)
        first = RandomForestWordClassifier(n_trees=10, seed=7).fit(X, labels)
        second = RandomForestWordClassifier(n_trees=10, seed=7).fit(X, labels)
        np.testing.assert_array_equal(first.predict_proba(X), second.predict_proba(X))

    def test_parallel_equals_sequential(self):
        samples, labels = toy_instance(seed=8, n=40)
        X = as_bow(samples, 9)
        sequential = RandomForestWordClassifier(n_trees=8, seed=3, n_jobs=1).fit(X, labels)
        parallel = RandomForestWordClassifier(n_trees=8, seed=3, n_jobs=2).fit(X, labels)
        np.testing.assert_array_equal(
            sequential.predict_proba(X), parallel.predict_proba(X)
        )

    def test_proba_sums_to_one(self):
        samples, labels = toy_instance(seed=2, n=30)
        X = as_bow(samples, 9)
        model = RandomForestWordClassifier(n_trees=20, seed=0).fit(X, labels)
        np.testing.assert_allclose(model.predict_proba(X).sum(axis=1), 1.0, atol=1e-9)

    def test_empty_training_rejected(self):
        with pytest.raises(EmptyTrainingError):
            RandomForestWordClassifier(n_trees=2).fit(as_bow([], 1), [])

    def test_tie_breaks_to_smallest_label(self):
        # two identical samples with different labels and no bootstrap:
        # every leaf is an exact 50/50 tie, argmax must take the
        # lexicographically smaller code
        X = as_bow([{0}, {0}], 1)
        model = RandomForestWordClassifier(n_trees=3, seed=4, bootstrap=False).fit(
            X, ["ZZZZ", "AAAA"]
        )
        assert model.predict(as_bow([{0}, set()], 1)).tolist() == ["AAAA", "AAAA"]
