"""End-to-end name -> ELF code pipeline.

``LegalFormClassifier`` is the sklearn-flavored estimator (fit on raw
names and codes, predict codes); ``TrainedPipeline`` wraps a fitted one
with the metadata that has to travel with it (jurisdiction, preprocessing
mode, data snapshot, seed) and is what the model store persists.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .classifiers import ClassifierSpec
from .ingest import JurisdictionDataset
from .preprocessing import PreprocessMode, normalize_name
from .vectorizer import BinaryBowVectorizer, Vocabulary

__all__ = ["LegalFormClassifier", "TrainedPipeline", "train_pipeline", "explain_tokens"]

FORMAT_VERSION = 1


class LegalFormClassifier(ClassifierMixin, BaseEstimator):
    """Normalize -> binary bag-of-words -> classify, as one estimator.

    Parameters
    ----------
    model : str, default="rf"
        One of ``cnb``, ``dt``, ``rf``, ``linear-svm``.
    prep : str, default="extended"
        Name harmonization mode, ``lower`` or ``extended``.
    seed : int, default=0
    hyperparams : dict or None
        Forwarded to the underlying classifier (e.g. ``alpha``,
        ``n_trees``, ``epochs``, ``regularization``).
    n_jobs : int, default=1
    """

    def __init__(
        self,
        model: str = "rf",
        prep: str = "extended",
        seed: int = 0,
        hyperparams: dict | None = None,
        n_jobs: int = 1,
    ):
        self.model = model
        self.prep = prep
        self.seed = seed
        self.hyperparams = hyperparams
        self.n_jobs = n_jobs

    def _mode(self) -> PreprocessMode:
        return PreprocessMode.from_string(self.prep)

    def fit(self, X: Sequence[str], y: Sequence[str]):
        spec = ClassifierSpec(
            kind=self.model, hyperparams=self.hyperparams or {}, seed=self.seed
        )
        normalized = [normalize_name(name, self._mode()) for name in X]
        self.vectorizer_ = BinaryBowVectorizer().fit(normalized)
        self.classifier_ = spec.build(n_jobs=self.n_jobs)
        self.classifier_.fit(self.vectorizer_.transform(normalized), y)
        self.classes_ = self.classifier_.classes_
        return self

    def _features(self, X: Sequence[str]):
        normalized = [normalize_name(name, self._mode()) for name in X]
        return self.vectorizer_.transform(normalized)

    def predict(self, X: Sequence[str]) -> np.ndarray:
        return self.classifier_.predict(self._features(X))

    def predict_proba(self, X: Sequence[str]) -> np.ndarray:
        return self.classifier_.predict_proba(self._features(X))

    @property
    def vocabulary_(self) -> Vocabulary:
        return self.vectorizer_.vocabulary_


@dataclass
class TrainedPipeline:
    """A fitted pipeline plus everything needed to reproduce it."""

    jurisdiction: str
    model: LegalFormClassifier
    training_snapshot_id: str = ""
    seed: int = 0
    created_at: str = ""
    format_version: int = FORMAT_VERSION

    @property
    def preprocess_mode(self) -> PreprocessMode:
        return PreprocessMode.from_string(self.model.prep)

    @property
    def vocabulary(self) -> Vocabulary:
        return self.model.vocabulary_

    @property
    def class_labels(self) -> tuple[str, ...]:
        return tuple(self.model.classes_)

    @property
    def classifier_kind(self) -> str:
        return self.model.model

    def classify(self, name: str) -> tuple[str, float]:
        code, probability = self.classify_topk(name, k=1)[0]
        return code, probability

    def classify_topk(self, name: str, k: int = 3) -> list[tuple[str, float]]:
        proba = self.model.predict_proba([name])[0]
        predicted = self.model.predict([name])[0]
        order = np.argsort(-proba, kind="stable")
        top = [(str(self.model.classes_[i]), float(proba[i])) for i in order[:k]]
        # predict() owns tie-breaking; keep the top slot consistent with it.
        if top and top[0][0] != predicted:
            target = next(i for i, (c, _) in enumerate(top) if c == predicted)
            top[0], top[target] = top[target], top[0]
        return top


def train_pipeline(
    dataset: JurisdictionDataset,
    spec: ClassifierSpec,
    mode: PreprocessMode | str = PreprocessMode.EXTENDED,
    n_jobs: int = 1,
    created_at: str = "",
) -> TrainedPipeline:
    """Fit on the full dataset (no folds) for deployment-style use."""
    mode = PreprocessMode.from_string(mode)
    model = LegalFormClassifier(
        model=spec.kind,
        prep=mode.value,
        seed=spec.seed,
        hyperparams=dict(spec.hyperparams) or None,
        n_jobs=n_jobs,
    )
    model.fit([s.legal_name for s in dataset.samples], [s.elf_code for s in dataset.samples])
    return TrainedPipeline(
        jurisdiction=dataset.jurisdiction,
        model=model,
        training_snapshot_id=dataset.snapshot_id,
        seed=spec.seed,
        created_at=created_at,
    )


def explain_tokens(pipeline: TrainedPipeline, name: str) -> list[tuple[str, float]]:
    """Per-token contribution scores for one prediction.

    For complement naive Bayes and the linear SVM the contribution of a
    token is its share of the score gap between the predicted class and
    the runner-up; for trees and forests it is how often the token's
    feature is tested along the sample's decision paths. Out-of-vocabulary
    tokens always score 0.
    """
    from .classifiers.cnb import ComplementNaiveBayes
    from .classifiers.forest import RandomForestWordClassifier
    from .classifiers.svm import LinearSvmClassifier
    from .classifiers.tree import DecisionTreeWordClassifier
    from .preprocessing import tokenize

    normalized = normalize_name(name, pipeline.preprocess_mode)
    tokens = tokenize(normalized)
    vocab = pipeline.vocabulary
    clf = pipeline.model.classifier_
    # Duplicate tokens count once, mirroring the binary feature space.
    token_ids = list(dict.fromkeys((t, vocab.index.get(t)) for t in tokens))
    present = sorted({i for _, i in token_ids if i is not None})
    contributions = {t: 0.0 for t, _ in token_ids}

    if isinstance(clf, (ComplementNaiveBayes, LinearSvmClassifier)):
        if isinstance(clf, ComplementNaiveBayes):
            scores = clf.feature_weights_[:, present].sum(axis=1)
            ranked = np.argsort(scores, kind="stable")  # lower is better
            best, runner = ranked[0], (ranked[1] if len(ranked) > 1 else ranked[0])
            per_feature = clf.feature_weights_[runner] - clf.feature_weights_[best]
        else:
            scores = clf.intercept_ + clf.coef_[:, present].sum(axis=1)
            ranked = np.argsort(-scores, kind="stable")  # higher is better
            best, runner = ranked[0], (ranked[1] if len(ranked) > 1 else ranked[0])
            per_feature = clf.coef_[best] - clf.coef_[runner]
        for token, idx in token_ids:
            if idx is not None:
                contributions[token] += float(per_feature[idx])
    elif isinstance(clf, (DecisionTreeWordClassifier, RandomForestWordClassifier)):
        trees = clf.trees_ if isinstance(clf, RandomForestWordClassifier) else [clf.tree_]
        present_set = frozenset(present)
        uses: dict[int, int] = {}
        for tree in trees:
            for feature in tree.decision_path_features(present_set):
                uses[feature] = uses.get(feature, 0) + 1
        total = sum(uses.values()) or 1
        for token, idx in token_ids:
            if idx is not None and idx in uses:
                contributions[token] += uses[idx] / total
    else:
        raise TypeError(f"no token attribution for {type(clf).__name__}")

    return sorted(contributions.items(), key=lambda kv: (-kv[1], kv[0]))
