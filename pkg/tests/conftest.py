import csv
from contextlib import contextmanager
from pathlib import Path

import pytest

from elfkit.ingest import JurisdictionDataset, DatasetSample
from elfkit.registry import load_registry

# Mirrors the published US-Delaware form list so registry lookups behave
# like the real thing.
US_DE_FORMS = [
    ("9ASJ", "Commercial Bank"),
    ("XTIQ", "Corporation"),
    ("HZEH", "Limited Liability Company"),
    ("TGMR", "Limited Liability Limited Partnership"),
    ("1HXP", "Limited Liability Partnership"),
    ("T91T", "Limited Partnership"),
    ("MIPY", "Non-deposit Trust Company"),
    ("QF4W", "Partnership"),
    ("JU79", "Savings Bank"),
    ("4FSX", "Statutory Trust"),
    ("12N6", "Unincorporated Nonprofit Association"),
]

ELF_LIST_HEADER = [
    "ELF Code",
    "Country Code (ISO 3166-1)",
    "Country sub-division code (ISO 3166-2)",
    "Entity Legal Form name Local name",
    "Language",
    "Abbreviations Local language",
    "ELF Status ACTV/INAC",
]


def write_elf_list(path: Path, extra_rows=()):
    rows = [
        ["2HBR", "DE", "", "Gesellschaft mit beschränkter Haftung", "German", "GmbH;GesmbH", "ACTV"],
        ["V2YH", "DE", "", "Stiftung", "German", "", "ACTV"],
        ["AZFE", "DE", "", "eingetragene Genossenschaft", "German", "eG", "ACTV"],
        ["SQKS", "DE", "", "Körperschaft des öffentlichen Rechts", "German", "KdöR", "ACTV"],
        ["XJHM", "SE", "", "Aktiebolag", "Swedish", "AB", "ACTV"],
        ["SDX0", "US", "US-NY", "Limited Liability Company", "English", "LLC;L.L.C.", "ACTV"],
        ["7QQ0", "JP", "", "合同会社", "Japanese", "", "ACTV"],
        ["54M6", "DE", "", "Offene Handelsgesellschaft", "German", "OHG", "INAC"],
    ] + [
        [code, "US", "US-DE", name, "English", "", "ACTV"] for code, name in US_DE_FORMS
    ] + [list(r) for r in extra_rows]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(ELF_LIST_HEADER)
        writer.writerows(rows)
    return path


@pytest.fixture
def elf_list_csv(tmp_path):
    return write_elf_list(tmp_path / "elf-list.csv")


@pytest.fixture
def registry(elf_list_csv):
    return load_registry(elf_list_csv)


def make_dataset(samples, jurisdiction="DE", snapshot_id="2022-09-14"):
    """samples: iterable of (lei, name, code)."""
    histogram = {}
    for _, _, code in samples:
        histogram[code] = histogram.get(code, 0) + 1
    return JurisdictionDataset(
        jurisdiction=jurisdiction,
        samples=tuple(DatasetSample(lei=l, legal_name=n, elf_code=c) for l, n, c in samples),
        class_histogram=histogram,
        snapshot_id=snapshot_id,
    )


def lei(i: int) -> str:
    return f"5493{i:016d}"


@pytest.fixture
def separable_dataset():
    """One word decides the label: gmbh -> 2HBR, eg -> AZFE."""
    samples = []
    for i in range(30):
        samples.append((lei(i), f"Alpha Beta{i % 7} GmbH", "2HBR"))
    for i in range(30, 50):
        samples.append((lei(i), f"Gamma Delta{i % 5} eG", "AZFE"))
    return make_dataset(samples)


# --- acceptance criteria reporting -----------------------------------------

_acceptance_results: list[tuple[str, str]] = []


@contextmanager
def criterion(name: str):
    """Record one acceptance criterion's outcome for the terminal summary."""
    try:
        yield
    except Exception:
        _acceptance_results.append((name, "FAIL"))
        raise
    _acceptance_results.append((name, "PASS"))


def record_skip(name: str, reason: str):
    _acceptance_results.append((name, f"SKIP ({reason})"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, outcome in _acceptance_results:
        terminalreporter.write_line(f"{outcome}: {name}")
