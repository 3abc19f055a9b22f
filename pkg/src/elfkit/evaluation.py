"""Cross-validation protocol and F1 scoring.

Every model — in-package or external — is scored the same way: samples
are split into 5 stratified, non-overlapping folds; each fold is
predicted by a model trained on the other four; metrics are computed on
the concatenation of all folds' predictions. Micro F1 pools true/false
positives globally (for single-label, full-coverage predictions it equals
accuracy); macro F1 averages per-class F1 without weighting, so minority
classes count as much as the head class.
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .classifiers import ClassifierSpec, derive_child_seeds
from .ingest import JurisdictionDataset
from .preprocessing import PreprocessMode, normalize_name, tokenize
from .vectorizer import BinaryBowVectorizer

__all__ = [
    "N_FOLDS",
    "FoldAssignment",
    "PredictionRow",
    "EvalReport",
    "TooFewSamplesError",
    "MixedJurisdictionsError",
    "MissingSamplesError",
    "DuplicateSamplesError",
    "UnknownSampleError",
    "stratified_folds",
    "cross_validate",
    "micro_f1",
    "macro_f1",
    "weighted_f1",
    "per_class_metrics",
    "build_report",
    "compare_models",
    "score_external",
    "write_exchange_file",
    "read_exchange_file",
    "write_folds_file",
    "read_folds_file",
]

N_FOLDS = 5

EXCHANGE_HEADER = ["lei", "fold", "gold_elf", "predicted_elf", "probability", "model_id"]


class TooFewSamplesError(ValueError):
    pass


class MixedJurisdictionsError(ValueError):
    pass


class MissingSamplesError(ValueError):
    def __init__(self, leis: Sequence[str]):
        preview = ", ".join(list(leis)[:10])
        more = "" if len(leis) <= 10 else f" (+{len(leis) - 10} more)"
        super().__init__(f"{len(leis)} dataset samples missing from predictions: {preview}{more}")
        self.leis = list(leis)


class DuplicateSamplesError(ValueError):
    pass


class UnknownSampleError(ValueError):
    pass


@dataclass(frozen=True)
class FoldAssignment:
    """Sample index -> fold id, stratified by class."""

    fold_of: np.ndarray
    n_folds: int = N_FOLDS

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.fold_of == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.fold_of != fold)


@dataclass(frozen=True)
class PredictionRow:
    sample_index: int
    lei: str
    gold: str
    predicted: str
    probability: float
    fold: int
    model_id: str


@dataclass(frozen=True)
class EvalReport:
    model_id: str
    jurisdiction: str
    micro_f1: float
    macro_f1: float
    weighted_f1: float
    per_class: dict[str, tuple[float, float, float, int]]
    n_samples: int
    n_classes: int
    seed: int = 0
    preprocess_mode: str = ""
    snapshot_id: str = ""
    source: str = "traditional"  # or "transformer"
    notes: dict[str, str] = field(default_factory=dict)

    def to_json(self) -> str:
        payload = {
            "model_id": self.model_id,
            "jurisdiction": self.jurisdiction,
            "micro_f1": self.micro_f1,
            "macro_f1": self.macro_f1,
            "weighted_f1": self.weighted_f1,
            "per_class": {
                code: {"precision": p, "recall": r, "f1": f, "support": s}
                for code, (p, r, f, s) in sorted(self.per_class.items())
            },
            "n_samples": self.n_samples,
            "n_classes": self.n_classes,
            "seed": self.seed,
            "preprocess_mode": self.preprocess_mode,
            "snapshot_id": self.snapshot_id,
            "source": self.source,
            "notes": self.notes,
        }
        return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "EvalReport":
        data = json.loads(text)
        per_class = {
            code: (m["precision"], m["recall"], m["f1"], m["support"])
            for code, m in data["per_class"].items()
        }
        return cls(
            model_id=data["model_id"],
            jurisdiction=data["jurisdiction"],
            micro_f1=data["micro_f1"],
            macro_f1=data["macro_f1"],
            weighted_f1=data["weighted_f1"],
            per_class=per_class,
            n_samples=data["n_samples"],
            n_classes=data["n_classes"],
            seed=data.get("seed", 0),
            preprocess_mode=data.get("preprocess_mode", ""),
            snapshot_id=data.get("snapshot_id", ""),
            source=data.get("source", "traditional"),
            notes=data.get("notes", {}),
        )


def stratified_folds(labels: Sequence[str], n_folds: int = N_FOLDS, seed: int = 0) -> FoldAssignment:
    """Deal each class round-robin across folds after a seeded shuffle.

    Classes smaller than ``n_folds`` go one-per-fold starting at a seeded
    offset so rare classes do not pile up in fold 0. Per-class fold counts
    never differ by more than one.
    """
    labels = np.asarray(labels, dtype=object)
    n = len(labels)
    if n < n_folds:
        raise TooFewSamplesError(f"{n} samples cannot fill {n_folds} folds")
    rng = np.random.default_rng(seed)
    fold_of = np.empty(n, dtype=np.int64)
    for cls in sorted(set(labels.tolist())):
        idx = np.flatnonzero(labels == cls)
        idx = rng.permutation(idx)
        start = int(rng.integers(n_folds)) if len(idx) < n_folds else 0
        fold_of[idx] = (start + np.arange(len(idx))) % n_folds
    return FoldAssignment(fold_of=fold_of, n_folds=n_folds)


def cross_validate(
    dataset: JurisdictionDataset,
    spec: ClassifierSpec,
    mode: PreprocessMode | str = PreprocessMode.EXTENDED,
    seed: int = 0,
    n_folds: int = N_FOLDS,
    n_jobs: int = 1,
    folds: FoldAssignment | None = None,
) -> list[PredictionRow]:
    """Train/predict over all folds; returns one row per sample.

    The vocabulary is refitted per fold from the training split alone, so
    words unique to a test fold stay out-of-vocabulary for it.
    """
    if len(dataset.samples) == 0:
        raise TooFewSamplesError("empty dataset")
    mode = PreprocessMode.from_string(mode)
    labels = [s.elf_code for s in dataset.samples]
    if folds is None:
        folds = stratified_folds(labels, n_folds=n_folds, seed=seed)
    normalized = [normalize_name(s.legal_name, mode) for s in dataset.samples]
    labels_arr = np.asarray(labels, dtype=object)
    model_id = spec.model_id(mode is PreprocessMode.EXTENDED)
    fold_seeds = derive_child_seeds(seed, folds.n_folds)

    rows: list[PredictionRow] = []
    for fold in range(folds.n_folds):
        train_idx = folds.train_indices(fold)
        test_idx = folds.test_indices(fold)
        if len(test_idx) == 0:
            continue
        vectorizer = BinaryBowVectorizer().fit(normalized[i] for i in train_idx)
        X_train = vectorizer.transform(normalized[i] for i in train_idx)
        X_test = vectorizer.transform(normalized[i] for i in test_idx)
        fold_seed = int(fold_seeds[fold].generate_state(1)[0])
        model = spec.with_seed(fold_seed).build(n_jobs=n_jobs)
        model.fit(X_train, labels_arr[train_idx])
        proba = model.predict_proba(X_test)
        predicted = model.predict(X_test)
        class_pos = {c: i for i, c in enumerate(model.classes_)}
        for local, sample_index in enumerate(test_idx):
            sample = dataset.samples[sample_index]
            pred = predicted[local]
            rows.append(
                PredictionRow(
                    sample_index=int(sample_index),
                    lei=sample.lei,
                    gold=sample.elf_code,
                    predicted=str(pred),
                    probability=float(proba[local, class_pos[pred]]),
                    fold=fold,
                    model_id=model_id,
                )
            )
    rows.sort(key=lambda r: r.sample_index)
    return rows


def _confusion(rows: Iterable[PredictionRow]):
    tp: dict[str, int] = {}
    fp: dict[str, int] = {}
    fn: dict[str, int] = {}
    support: dict[str, int] = {}
    for row in rows:
        support[row.gold] = support.get(row.gold, 0) + 1
        if row.predicted == row.gold:
            tp[row.gold] = tp.get(row.gold, 0) + 1
        else:
            fp[row.predicted] = fp.get(row.predicted, 0) + 1
            fn[row.gold] = fn.get(row.gold, 0) + 1
    labels = sorted(set(support) | set(fp))
    return labels, tp, fp, fn, support


def micro_f1(rows: Sequence[PredictionRow]) -> float:
    """F1 from globally pooled counts (equals accuracy here)."""
    if not rows:
        raise ValueError("no prediction rows")
    _, tp, fp, fn, _ = _confusion(rows)
    tp_total = sum(tp.values())
    fp_total = sum(fp.values())
    fn_total = sum(fn.values())
    denominator = 2 * tp_total + fp_total + fn_total
    return 2 * tp_total / denominator if denominator else 0.0


def per_class_metrics(rows: Sequence[PredictionRow]) -> dict[str, tuple[float, float, float, int]]:
    """Per-class (precision, recall, f1, support) over gold ∪ predicted labels.

    Zero-division cases score 0, so a class that is never predicted and
    never correct contributes an F1 of 0.
    """
    labels, tp, fp, fn, support = _confusion(rows)
    out = {}
    for label in labels:
        t, p, n = tp.get(label, 0), fp.get(label, 0), fn.get(label, 0)
        precision = t / (t + p) if t + p else 0.0
        recall = t / (t + n) if t + n else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        out[label] = (precision, recall, f1, support.get(label, 0))
    return out


def macro_f1(rows: Sequence[PredictionRow]) -> float:
    if not rows:
        raise ValueError("no prediction rows")
    metrics = per_class_metrics(rows)
    return sum(f1 for _, _, f1, _ in metrics.values()) / len(metrics)


def weighted_f1(rows: Sequence[PredictionRow]) -> float:
    if not rows:
        raise ValueError("no prediction rows")
    metrics = per_class_metrics(rows)
    total = sum(s for _, _, _, s in metrics.values())
    return sum(f1 * s for _, _, f1, s in metrics.values()) / total


def build_report(
    rows: Sequence[PredictionRow],
    jurisdiction: str,
    seed: int = 0,
    preprocess_mode: str = "",
    snapshot_id: str = "",
    source: str = "traditional",
    notes: dict[str, str] | None = None,
) -> EvalReport:
    model_ids = {r.model_id for r in rows}
    if len(model_ids) != 1:
        raise ValueError(f"rows mix model ids: {sorted(model_ids)}")
    return EvalReport(
        model_id=model_ids.pop(),
        jurisdiction=jurisdiction,
        micro_f1=micro_f1(rows),
        macro_f1=macro_f1(rows),
        weighted_f1=weighted_f1(rows),
        per_class=per_class_metrics(rows),
        n_samples=len(rows),
        n_classes=len({r.gold for r in rows}),
        seed=seed,
        preprocess_mode=preprocess_mode,
        snapshot_id=snapshot_id,
        source=source,
        notes=dict(notes or {}),
    )


def compare_models(reports: Sequence[EvalReport]) -> dict:
    """Best-by-F1 / best-by-macro-F1 summary across model reports.

    Traditional models fill both "best" slots; the best external
    (transformer) model is picked by micro F1 alone but shown with both
    scores. Ties break toward the lexicographically smaller model id.
    """
    if not reports:
        raise ValueError("no reports")
    jurisdictions = {r.jurisdiction for r in reports}
    if len(jurisdictions) != 1:
        raise MixedJurisdictionsError(f"reports span jurisdictions {sorted(jurisdictions)}")
    traditional = [r for r in reports if r.source != "transformer"]
    transformer = [r for r in reports if r.source == "transformer"]

    def best(items: Sequence[EvalReport], key) -> EvalReport:
        return min(items, key=lambda r: (-key(r), r.model_id))

    row: dict = {
        "jurisdiction": jurisdictions.pop(),
        "n_samples": max(r.n_samples for r in reports),
        "n_classes": max(r.n_classes for r in reports),
    }
    if traditional:
        by_f1 = best(traditional, lambda r: r.micro_f1)
        by_macro = best(traditional, lambda r: r.macro_f1)
        row["best_traditional_by_f1"] = {"model_id": by_f1.model_id, "micro_f1": by_f1.micro_f1}
        row["best_traditional_by_macro_f1"] = {
            "model_id": by_macro.model_id,
            "macro_f1": by_macro.macro_f1,
        }
    if transformer:
        ext = best(transformer, lambda r: r.micro_f1)
        row["best_transformer_by_f1"] = {
            "model_id": ext.model_id,
            "micro_f1": ext.micro_f1,
            "macro_f1": ext.macro_f1,
        }
    return row


def write_exchange_file(
    path: str | Path,
    rows: Sequence[PredictionRow],
    header_comments: Sequence[str] = (),
) -> None:
    """Prediction-exchange CSV; `#` comment lines may precede the header."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        for comment in header_comments:
            fh.write(f"# {comment}\n")
        writer = csv.writer(fh)
        writer.writerow(EXCHANGE_HEADER)
        for row in rows:
            writer.writerow(
                [
                    row.lei,
                    row.fold,
                    row.gold,
                    row.predicted,
                    f"{row.probability:.6f}",
                    row.model_id,
                ]
            )


def read_exchange_file(path: str | Path) -> list[PredictionRow]:
    with open(path, newline="", encoding="utf-8") as fh:
        filtered = (line for line in fh if not line.startswith("#"))
        reader = csv.reader(filtered)
        header = next(reader, None)
        if header != EXCHANGE_HEADER:
            raise ValueError(
                f"{path}: expected header {','.join(EXCHANGE_HEADER)}, got {header}"
            )
        rows = []
        for i, rec in enumerate(reader):
            if len(rec) != len(EXCHANGE_HEADER):
                raise ValueError(f"{path}: row {i + 2} has {len(rec)} fields")
            rows.append(
                PredictionRow(
                    sample_index=i,
                    lei=rec[0],
                    fold=int(rec[1]),
                    gold=rec[2],
                    predicted=rec[3],
                    probability=float(rec[4]),
                    model_id=rec[5],
                )
            )
    return rows


def write_folds_file(path: str | Path, leis: Sequence[str], folds: FoldAssignment) -> None:
    """`lei,fold` CSV so external trainers replay identical splits."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["lei", "fold"])
        for lei, fold in zip(leis, folds.fold_of):
            writer.writerow([lei, int(fold)])


def read_folds_file(path: str | Path) -> dict[str, int]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(line for line in fh if not line.startswith("#"))
        header = next(reader, None)
        if header != ["lei", "fold"]:
            raise ValueError(f"{path}: expected header lei,fold")
        return {lei: int(fold) for lei, fold in reader}


def score_external(
    predictions_file: str | Path,
    dataset: JurisdictionDataset,
    source: str = "transformer",
) -> EvalReport:
    """Score an externally produced exchange file on a dataset.

    Every dataset sample must be covered exactly once and gold labels
    must agree with the dataset. Predicted codes outside the dataset's
    label set only warn: the metric path handles them as extra classes.
    """
    rows = read_exchange_file(predictions_file)
    by_lei = {}
    duplicates = []
    for row in rows:
        if row.lei in by_lei:
            duplicates.append(row.lei)
        by_lei[row.lei] = row
    if duplicates:
        raise DuplicateSamplesError(
            f"{len(duplicates)} duplicated LEIs in predictions, e.g. {duplicates[:5]}"
        )

    dataset_leis = {s.lei: s for s in dataset.samples}
    if len(dataset_leis) != len(dataset.samples):
        raise DuplicateSamplesError("dataset contains duplicated LEIs")
    missing = sorted(set(dataset_leis) - set(by_lei))
    if missing:
        raise MissingSamplesError(missing)
    unknown = sorted(set(by_lei) - set(dataset_leis))
    if unknown:
        raise UnknownSampleError(
            f"{len(unknown)} predicted LEIs not in dataset, e.g. {unknown[:5]}"
        )

    known_labels = set(dataset.class_histogram)
    scored: list[PredictionRow] = []
    for index, sample in enumerate(dataset.samples):
        row = by_lei[sample.lei]
        if row.gold != sample.elf_code:
            raise ValueError(
                f"gold label mismatch for {sample.lei}: dataset {sample.elf_code}, file {row.gold}"
            )
        if row.predicted not in known_labels:
            warnings.warn(
                f"predicted label {row.predicted} for {sample.lei} is outside the dataset's classes",
                stacklevel=2,
            )
        scored.append(
            PredictionRow(
                sample_index=index,
                lei=row.lei,
                gold=row.gold,
                predicted=row.predicted,
                probability=row.probability,
                fold=row.fold,
                model_id=row.model_id,
            )
        )
    return build_report(
        scored,
        jurisdiction=dataset.jurisdiction,
        snapshot_id=dataset.snapshot_id,
        source=source,
    )
