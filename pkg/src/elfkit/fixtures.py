"""Reference entities used across the test suite and the docs.

Fourteen real-world legal names covering the representation pitfalls this
package exists to handle: punctuation and abbreviation variants of the
same form, fully uppercased names, forms written out at either end of the
name, names with no form mention at all, non-Latin scripts, and the
foundation-that-contains-a-cooperative's-name pair used for attribution
examples. The file is NFC-normalized UTF-8 and byte-frozen.
"""

from __future__ import annotations

import csv
import unicodedata
from dataclasses import dataclass
from importlib import resources

__all__ = ["FixtureEntity", "load_fixtures", "fixture_file_bytes"]


@dataclass(frozen=True)
class FixtureEntity:
    legal_name: str
    jurisdiction: str
    elf_code: str
    note: str


def fixture_file_bytes() -> bytes:
    return (
        resources.files("elfkit") / "data" / "fixture_entities.tsv"
    ).read_bytes()


def load_fixtures() -> list[FixtureEntity]:
    text = fixture_file_bytes().decode("utf-8")
    if unicodedata.normalize("NFC", text) != text:
        raise ValueError("fixture file is not NFC-normalized")
    reader = csv.reader(text.splitlines(), dialect="excel-tab")
    header = next(reader)
    if header != ["legal_name", "jurisdiction", "elf_code", "note"]:
        raise ValueError(f"unexpected fixture header {header}")
    return [
        FixtureEntity(legal_name=name, jurisdiction=jur, elf_code=code, note=note)
        for name, jur, code, note in reader
    ]
