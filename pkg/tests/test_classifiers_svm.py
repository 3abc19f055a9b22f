import numpy as np
import pytest

from elfkit.classifiers import EmptyTrainingError, LinearSvmClassifier, SingleClassError
from elfkit.vectorizer import BowVector


def as_bow(samples, n_features):
    return [BowVector(tuple(sorted(s)), n_features) for s in samples]


class TestFit:
    def test_separable_toy_converges(self):
        samples = [{0}, {0, 2}, {1}, {1, 2}] * 5
        labels = ["A", "A", "B", "B"] * 5
        model = LinearSvmClassifier(epochs=50, seed=0).fit(as_bow(samples, 3), labels)
        assert model.predict(as_bow(samples, 3)).tolist() == labels

    def test_single_class_rejected(self):
        with pytest.raises(SingleClassError):
            LinearSvmClassifier().fit(as_bow([{0}, {1}], 2), ["A", "A"])

    def test_empty_training_rejected(self):
        with pytest.raises(EmptyTrainingError):
            LinearSvmClassifier().fit(as_bow([], 2), [])

    def test_conflicting_duplicates_deterministic(self):
        samples = [{0}, {0}, {0}, {0}]
        labels = ["A", "B", "A", "B"]
        runs = [
            LinearSvmClassifier(epochs=7, seed=13)
            .fit(as_bow(samples, 1), labels)
            .predict(as_bow([{0}], 1))[0]
            for _ in range(2)
        ]
        assert runs[0] == runs[1]

    def test_coef_bytes_deterministic(self):
        samples = [{0}, {1}, {0, 1}, {1}]
        labels = ["A", "B", "A", "B"]
        first = LinearSvmClassifier(seed=3).fit(as_bow(samples, 2), labels)
        second = LinearSvmClassifier(seed=3).fit(as_bow(samples, 2), labels)
        assert first.coef_.tobytes() == second.coef_.tobytes()
        assert first.intercept_.tobytes() == second.intercept_.tobytes()


class TestDecision:
    def test_zero_vector_uses_bias_only(self):
        # single feature: a zero vector's margin must equal the intercept
        samples = [{0}, {0}, set(), set()]
        labels = ["A", "A", "B", "B"]
        model = LinearSvmClassifier(epochs=30, seed=1).fit(as_bow(samples, 1), labels)
        margins = model.decision_function(as_bow([set()], 1))[0]
        np.testing.assert_array_equal(margins, model.intercept_)
        assert model.predict(as_bow([set()], 1))[0] == model.classes_[np.argmax(model.intercept_)]

    def test_proba_sums_to_one_and_matches_predict(self):
        rng = np.random.default_rng(2)
        samples = [set(np.flatnonzero(rng.integers(0, 2, 5)).tolist()) for _ in range(30)]
        labels = [f"C{int(c)}" for c in rng.integers(0, 3, 30)]
        model = LinearSvmClassifier(seed=0).fit(as_bow(samples, 5), labels)
        proba = model.predict_proba(as_bow(samples, 5))
        np.testing.assert_allclose(proba.sum(axis=1), 1.0, atol=1e-9)
        assert (model.classes_[np.argmax(proba, axis=1)] == model.predict(as_bow(samples, 5))).all()

    def test_label_closure(self):
        samples = [{0}, {1}]
        model = LinearSvmClassifier(epochs=5, seed=0).fit(as_bow(samples, 2), ["A", "B"])
        predictions = model.predict(as_bow([{0}, {1}, set(), {0, 1}], 2))
        assert set(predictions) <= {"A", "B"}

    def test_invalid_hyperparams_rejected(self):
        with pytest.raises(ValueError):
            LinearSvmClassifier(epochs=0).fit(as_bow([{0}, {1}], 2), ["A", "B"])
        with pytest.raises(ValueError):
            LinearSvmClassifier(regularization=0.0).fit(as_bow([{0}, {1}], 2), ["A", "B"])
