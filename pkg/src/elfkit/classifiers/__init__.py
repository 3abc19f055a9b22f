"""Bag-of-words classifier family and the spec that names its members."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

from .base import EmptyTrainingError, SingleClassError, derive_child_seeds
from .cnb import ComplementNaiveBayes
from .forest import RandomForestWordClassifier
from .svm import LinearSvmClassifier
from .tree import DecisionTreeWordClassifier

__all__ = [
    "CLASSIFIER_KINDS",
    "ClassifierSpec",
    "ComplementNaiveBayes",
    "DecisionTreeWordClassifier",
    "RandomForestWordClassifier",
    "LinearSvmClassifier",
    "EmptyTrainingError",
    "SingleClassError",
    "derive_child_seeds",
]

CLASSIFIER_KINDS = ("cnb", "dt", "rf", "linear-svm")

_DEFAULT_HYPERPARAMS: dict[str, dict[str, Any]] = {
    "cnb": {"alpha": 1.0},
    "dt": {},
    "rf": {"n_trees": 100},
    "linear-svm": {"epochs": 20, "regularization": 1e-4},
}


@dataclass(frozen=True)
class ClassifierSpec:
    """Name + hyperparameters + seed identifying one trainable model."""

    kind: str
    hyperparams: Mapping[str, Any] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in CLASSIFIER_KINDS:
            raise ValueError(
                f"unknown classifier kind {self.kind!r}; expected one of {CLASSIFIER_KINDS}"
            )
        unknown = set(self.hyperparams) - set(_DEFAULT_HYPERPARAMS[self.kind])
        if unknown:
            raise ValueError(f"unknown hyperparameters for {self.kind}: {sorted(unknown)}")
        for name, value in self.resolved_hyperparams().items():
            if not value > 0:
                raise ValueError(f"hyperparameter {name} must be positive, got {value}")

    def resolved_hyperparams(self) -> dict[str, Any]:
        params = dict(_DEFAULT_HYPERPARAMS[self.kind])
        params.update(self.hyperparams)
        return params

    def build(self, n_jobs: int = 1):
        params = self.resolved_hyperparams()
        if self.kind == "cnb":
            return ComplementNaiveBayes(alpha=params["alpha"])
        if self.kind == "dt":
            return DecisionTreeWordClassifier(seed=self.seed)
        if self.kind == "rf":
            return RandomForestWordClassifier(
                n_trees=params["n_trees"], seed=self.seed, n_jobs=n_jobs
            )
        return LinearSvmClassifier(
            epochs=params["epochs"],
            regularization=params["regularization"],
            seed=self.seed,
        )

    def with_seed(self, seed: int) -> "ClassifierSpec":
        return ClassifierSpec(kind=self.kind, hyperparams=dict(self.hyperparams), seed=seed)

    def model_id(self, extended_prep: bool) -> str:
        return f"{self.kind}+prep" if extended_prep else self.kind
