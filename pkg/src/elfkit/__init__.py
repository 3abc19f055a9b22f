"""Entity legal form classification from raw legal names.

Ingest LEI reference data, train bag-of-words classifiers per
jurisdiction against ISO 20275 ELF codes, evaluate them with stratified
cross-validation, and score externally produced predictions through the
same harness.
"""

from .classifiers import (
    ClassifierSpec,
    ComplementNaiveBayes,
    DecisionTreeWordClassifier,
    LinearSvmClassifier,
    RandomForestWordClassifier,
)
from .evaluation import (
    EvalReport,
    FoldAssignment,
    PredictionRow,
    cross_validate,
    macro_f1,
    micro_f1,
    score_external,
    stratified_folds,
)
from .ingest import JurisdictionDataset, build_datasets, filter_in_scope, ingest, load_dataset
from .model_store import load, save
from .pipeline import LegalFormClassifier, TrainedPipeline, train_pipeline
from .preprocessing import NameNormalizer, PreprocessMode, normalize_name, tokenize
from .registry import ElfRegistry, ElfRegistryEntry, load_registry
from .vectorizer import BinaryBowVectorizer, BowVector, Vocabulary, fit_vocabulary, vectorize

__version__ = "0.1.0"

__all__ = [
    "BinaryBowVectorizer",
    "BowVector",
    "ClassifierSpec",
    "ComplementNaiveBayes",
    "DecisionTreeWordClassifier",
    "ElfRegistry",
    "ElfRegistryEntry",
    "EvalReport",
    "FoldAssignment",
    "JurisdictionDataset",
    "LegalFormClassifier",
    "LinearSvmClassifier",
    "NameNormalizer",
    "PredictionRow",
    "PreprocessMode",
    "RandomForestWordClassifier",
    "TrainedPipeline",
    "Vocabulary",
    "build_datasets",
    "cross_validate",
    "filter_in_scope",
    "fit_vocabulary",
    "ingest",
    "load",
    "load_dataset",
    "load_registry",
    "macro_f1",
    "micro_f1",
    "normalize_name",
    "save",
    "score_external",
    "stratified_folds",
    "tokenize",
    "train_pipeline",
    "vectorize",
]
