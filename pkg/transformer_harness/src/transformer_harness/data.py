"""Dataset TSV + fold CSV consumption.

Both files come from the companion bag-of-words toolkit: the dataset is a
``lei / name / elf_code`` TSV, the fold file a ``lei,fold`` CSV. Using the
exported folds (instead of re-splitting) keeps every model family on
identical train/test partitions.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

__all__ = ["FoldedSample", "FoldMismatchError", "load_folded_dataset", "EXCHANGE_HEADER"]

EXCHANGE_HEADER = ["lei", "fold", "gold_elf", "predicted_elf", "probability", "model_id"]


class FoldMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class FoldedSample:
    lei: str
    legal_name: str
    elf_code: str
    fold: int


def load_folded_dataset(dataset_path: str | Path, folds_path: str | Path) -> list[FoldedSample]:
    with open(dataset_path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, dialect="excel-tab")
        header = next(reader, None)
        if header != ["lei", "name", "elf_code"]:
            raise ValueError(f"{dataset_path}: expected lei/name/elf_code TSV, got {header}")
        rows = [(lei, name, code) for lei, name, code in reader]

    with open(folds_path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(line for line in fh if not line.startswith("#"))
        header = next(reader, None)
        if header != ["lei", "fold"]:
            raise ValueError(f"{folds_path}: expected lei,fold CSV, got {header}")
        fold_of = {lei: int(fold) for lei, fold in reader}

    dataset_leis = {lei for lei, _, _ in rows}
    if dataset_leis != set(fold_of):
        missing = sorted(dataset_leis - set(fold_of))[:5]
        extra = sorted(set(fold_of) - dataset_leis)[:5]
        raise FoldMismatchError(
            f"fold file does not match dataset (missing e.g. {missing}, extra e.g. {extra})"
        )
    if len(dataset_leis) != len(rows):
        raise FoldMismatchError("dataset contains duplicated LEIs")
    return [
        FoldedSample(lei=lei, legal_name=name, elf_code=code, fold=fold_of[lei])
        for lei, name, code in rows
    ]
