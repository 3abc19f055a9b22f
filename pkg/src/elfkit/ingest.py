"""Streaming ingestion of LEI golden-copy data.

The golden copy is a multi-gigabyte CSV; this module reads it row by row,
applies the scope filters (active entities whose registration is issued),
and regroups what survives into one labeled dataset per jurisdiction.
Datasets are persisted as small TSV files so experiments never have to
touch the golden copy twice.
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .config import read_kv_config
from .registry import (
    ElfRegistry,
    MissingColumnError,
    is_valid_elf_code,
    is_valid_jurisdiction,
)

__all__ = [
    "DEFAULT_LEI_COLUMNS",
    "LegalEntityRecord",
    "DatasetSample",
    "JurisdictionDataset",
    "IngestStats",
    "ingest",
    "filter_in_scope",
    "build_datasets",
    "dataset_stats",
    "save_dataset",
    "load_dataset",
    "infer_snapshot_id",
]

DEFAULT_LEI_COLUMNS = {
    "lei": "LEI",
    "legal_name": "Entity.LegalName",
    "jurisdiction": "Entity.LegalJurisdiction",
    "elf_code": "Entity.LegalForm.EntityLegalFormCode",
    "entity_status": "Entity.EntityStatus",
    "registration_status": "Registration.RegistrationStatus",
}

DEFAULT_EXCLUSIONS = ("CN", "CA")

_LEI_RE = re.compile(r"^[A-Z0-9]{20}$")
_SNAPSHOT_RE = re.compile(r"(20\d{2})(\d{2})(\d{2})")


@dataclass(frozen=True)
class LegalEntityRecord:
    lei: str
    legal_name: str
    jurisdiction: str
    elf_code: str
    entity_status: str
    registration_status: str


@dataclass(frozen=True)
class DatasetSample:
    lei: str
    legal_name: str
    elf_code: str


@dataclass(frozen=True)
class JurisdictionDataset:
    jurisdiction: str
    samples: tuple[DatasetSample, ...]
    class_histogram: dict[str, int]
    snapshot_id: str = ""

    def __post_init__(self):
        if sum(self.class_histogram.values()) != len(self.samples):
            raise ValueError("class histogram does not sum to the sample count")


@dataclass
class IngestStats:
    """Single-pass accounting: every row is either emitted or skipped."""

    total_rows: int = 0
    emitted: int = 0
    skipped: dict[str, int] = field(default_factory=dict)
    unknown_registry_codes: int = 0

    def skip(self, reason: str):
        self.total_rows += 1
        self.skipped[reason] = self.skipped.get(reason, 0) + 1

    def emit(self):
        self.total_rows += 1
        self.emitted += 1

    @property
    def skipped_total(self) -> int:
        return sum(self.skipped.values())

    def as_dict(self) -> dict:
        return {
            "total_rows": self.total_rows,
            "emitted": self.emitted,
            "skipped": dict(sorted(self.skipped.items())),
            "unknown_registry_codes": self.unknown_registry_codes,
        }


def infer_snapshot_id(path: str | Path) -> str:
    """Golden-copy file names embed their publication date; dig it out."""
    match = _SNAPSHOT_RE.search(Path(path).name)
    if match:
        return "-".join(match.groups())
    return ""


def ingest(
    path: str | Path,
    registry: ElfRegistry | None = None,
    column_map: "dict[str, str] | str | Path | None" = None,
    stats: IngestStats | None = None,
) -> Iterator[LegalEntityRecord]:
    """Stream records out of a golden-copy CSV.

    Rows with an empty name, a malformed LEI/ELF code, or an
    out-of-pattern jurisdiction are counted in ``stats`` and skipped;
    a missing column is fatal. Codes absent from the registry are kept
    (the registry version may lag the data) but counted.
    """
    if isinstance(column_map, (str, Path)):
        column_map = read_kv_config(column_map)
    columns = dict(DEFAULT_LEI_COLUMNS)
    if column_map:
        unknown = set(column_map) - set(columns)
        if unknown:
            raise ValueError(f"unknown column-map fields: {sorted(unknown)}")
        columns.update(column_map)
    if stats is None:
        stats = IngestStats()

    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise MissingColumnError(f"{path}: empty file, no header row")
        missing = [c for c in columns.values() if c not in reader.fieldnames]
        if missing:
            raise MissingColumnError(f"{path}: missing columns {missing}")
        for row in reader:
            lei = (row[columns["lei"]] or "").strip().upper()
            if not _LEI_RE.match(lei):
                stats.skip("malformed_lei")
                continue
            name = (row[columns["legal_name"]] or "").strip()
            if not name:
                stats.skip("empty_name")
                continue
            elf_code = (row[columns["elf_code"]] or "").strip().upper()
            if not is_valid_elf_code(elf_code):
                stats.skip("malformed_elf_code")
                continue
            jurisdiction = (row[columns["jurisdiction"]] or "").strip().upper()
            if not is_valid_jurisdiction(jurisdiction):
                stats.skip("malformed_jurisdiction")
                continue
            if registry is not None and elf_code not in registry:
                stats.unknown_registry_codes += 1
            stats.emit()
            yield LegalEntityRecord(
                lei=lei,
                legal_name=name,
                jurisdiction=jurisdiction,
                elf_code=elf_code,
                entity_status=(row[columns["entity_status"]] or "").strip().upper(),
                registration_status=(row[columns["registration_status"]] or "").strip().upper(),
            )


def filter_in_scope(records: Iterable[LegalEntityRecord]) -> Iterator[LegalEntityRecord]:
    """Keep active entities with an issued registration, nothing else."""
    for record in records:
        if record.entity_status == "ACTIVE" and record.registration_status == "ISSUED":
            yield record


def _is_excluded(jurisdiction: str, exclusions: Iterable[str]) -> bool:
    # A country-level exclusion covers its sub-jurisdictions too.
    for excluded in exclusions:
        if jurisdiction == excluded or jurisdiction.startswith(excluded + "-"):
            return True
    return False


def build_datasets(
    records: Iterable[LegalEntityRecord],
    top_n: int = 30,
    exclusions: Iterable[str] = DEFAULT_EXCLUSIONS,
    snapshot_id: str = "",
) -> dict[str, JurisdictionDataset]:
    """Group records by jurisdiction and keep the ``top_n`` largest.

    Samples are ordered by LEI, which makes the result independent of
    input row order. Ties in jurisdiction size break alphabetically.
    """
    exclusions = tuple(exclusions)
    groups: dict[str, list[LegalEntityRecord]] = {}
    for record in records:
        if _is_excluded(record.jurisdiction, exclusions):
            continue
        groups.setdefault(record.jurisdiction, []).append(record)

    ranked = sorted(groups.items(), key=lambda kv: (-len(kv[1]), kv[0]))[:top_n]
    datasets = {}
    for jurisdiction, recs in ranked:
        recs = sorted(recs, key=lambda r: r.lei)
        histogram: dict[str, int] = {}
        for rec in recs:
            histogram[rec.elf_code] = histogram.get(rec.elf_code, 0) + 1
        datasets[jurisdiction] = JurisdictionDataset(
            jurisdiction=jurisdiction,
            samples=tuple(
                DatasetSample(lei=r.lei, legal_name=r.legal_name, elf_code=r.elf_code)
                for r in recs
            ),
            class_histogram=histogram,
            snapshot_id=snapshot_id,
        )
    return datasets


def dataset_stats(
    dataset: JurisdictionDataset, registry: ElfRegistry | None = None
) -> list[tuple[str, str, int]]:
    """(code, local form name, count) rows sorted by local name."""
    rows = []
    for code, count in dataset.class_histogram.items():
        if registry is not None and code in registry:
            name = registry.resolve(code).local_name
        else:
            name = ""
        rows.append((code, name, count))
    rows.sort(key=lambda r: (r[1], r[0]))
    return rows


def save_dataset(dataset: JurisdictionDataset, path: str | Path) -> None:
    """Canonical per-jurisdiction TSV (lei, name, elf_code) plus metadata sidecar."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, dialect="excel-tab")
        writer.writerow(["lei", "name", "elf_code"])
        for sample in dataset.samples:
            writer.writerow([sample.lei, sample.legal_name, sample.elf_code])
    meta = {
        "jurisdiction": dataset.jurisdiction,
        "snapshot_id": dataset.snapshot_id,
        "n_samples": len(dataset.samples),
        "class_histogram": dict(sorted(dataset.class_histogram.items())),
    }
    path.with_suffix(".meta.json").write_text(
        json.dumps(meta, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )


def load_dataset(
    path: str | Path,
    jurisdiction: str | None = None,
    snapshot_id: str | None = None,
) -> JurisdictionDataset:
    """Read a dataset TSV; jurisdiction/snapshot come from the sidecar
    when present, else from the file stem and the arguments."""
    path = Path(path)
    meta_path = path.with_suffix(".meta.json")
    if meta_path.exists():
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        jurisdiction = jurisdiction or meta.get("jurisdiction")
        snapshot_id = snapshot_id if snapshot_id is not None else meta.get("snapshot_id", "")
    if jurisdiction is None:
        jurisdiction = path.stem.upper()
    samples = []
    histogram: dict[str, int] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, dialect="excel-tab")
        header = next(reader, None)
        if header != ["lei", "name", "elf_code"]:
            raise ValueError(f"{path}: expected header lei/name/elf_code, got {header}")
        for lei, name, elf_code in reader:
            samples.append(DatasetSample(lei=lei, legal_name=name, elf_code=elf_code))
            histogram[elf_code] = histogram.get(elf_code, 0) + 1
    return JurisdictionDataset(
        jurisdiction=jurisdiction,
        samples=tuple(samples),
        class_histogram=histogram,
        snapshot_id=snapshot_id or "",
    )
