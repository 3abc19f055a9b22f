"""The ISO 20275 entity legal form (ELF) code list.

Every label this package produces or consumes is a 4-character ELF code
that resolves, through the registry, to one jurisdiction-local legal form.
Codes ``8888`` and ``9999`` are reserved: they mean "no specific legal
form assignable" and carry no jurisdiction binding.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from pathlib import Path

from .config import read_kv_config

__all__ = [
    "RESERVED_CODES",
    "ElfRegistryEntry",
    "ElfRegistry",
    "load_registry",
    "is_valid_elf_code",
    "is_valid_jurisdiction",
    "RegistryError",
    "MalformedRowError",
    "DuplicateCodeError",
    "MissingColumnError",
    "UnknownCodeError",
]

RESERVED_CODES = ("8888", "9999")

_ELF_CODE_RE = re.compile(r"^[A-Z0-9]{4}$")
_JURISDICTION_RE = re.compile(r"^[A-Z]{2}(-[A-Z0-9]{2})?$")

_RESERVED_NAMES = {
    "8888": "Legal form not yet in the code list (reserved)",
    "9999": "No legal form (reserved)",
}

# Field name -> column header in the published code-list CSV. Overridable
# through a key=value mapping file because the layout shifts between
# code-list versions.
DEFAULT_ELF_COLUMNS = {
    "elf_code": "ELF Code",
    "country_code": "Country Code (ISO 3166-1)",
    "subdivision_code": "Country sub-division code (ISO 3166-2)",
    "local_name": "Entity Legal Form name Local name",
    "language": "Language",
    "abbreviations": "Abbreviations Local language",
    "status": "ELF Status ACTV/INAC",
}


class RegistryError(Exception):
    """Base for code-list loading and lookup failures."""


class MalformedRowError(RegistryError):
    def __init__(self, row_number: int, reason: str):
        super().__init__(f"row {row_number}: {reason}")
        self.row_number = row_number
        self.reason = reason


class DuplicateCodeError(RegistryError):
    pass


class MissingColumnError(RegistryError):
    pass


class UnknownCodeError(RegistryError, KeyError):
    pass


def is_valid_elf_code(code: str) -> bool:
    return bool(_ELF_CODE_RE.match(code))


def is_valid_jurisdiction(jurisdiction: str) -> bool:
    return bool(_JURISDICTION_RE.match(jurisdiction))


@dataclass(frozen=True)
class ElfRegistryEntry:
    """One code-list row: an ELF code bound to a jurisdiction-local form."""

    elf_code: str
    jurisdiction: str  # empty for reserved codes
    local_name: str
    language: str
    abbreviations: tuple[str, ...]
    status: str  # ACTV or INAC
    is_reserved: bool


def _reserved_entry(code: str) -> ElfRegistryEntry:
    return ElfRegistryEntry(
        elf_code=code,
        jurisdiction="",
        local_name=_RESERVED_NAMES[code],
        language="",
        abbreviations=(),
        status="ACTV",
        is_reserved=True,
    )


class ElfRegistry:
    """Immutable, in-memory view of the ELF code list.

    Reserved codes are always resolvable, whether or not the source file
    carried rows for them.
    """

    def __init__(self, entries: list[ElfRegistryEntry]):
        by_code: dict[str, ElfRegistryEntry] = {}
        for entry in entries:
            if entry.elf_code in by_code:
                raise DuplicateCodeError(f"duplicate ELF code {entry.elf_code}")
            by_code[entry.elf_code] = entry
        for code in RESERVED_CODES:
            by_code.setdefault(code, _reserved_entry(code))
        self._by_code = by_code
        self._entries = tuple(entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries)

    def __contains__(self, code: str) -> bool:
        return code in self._by_code

    def resolve(self, code: str) -> ElfRegistryEntry:
        try:
            return self._by_code[code]
        except KeyError:
            raise UnknownCodeError(f"unknown ELF code {code!r}") from None

    def codes_for_jurisdiction(self, jurisdiction: str) -> list[ElfRegistryEntry]:
        """All forms of one jurisdiction plus the reserved codes.

        Sorted by ELF code; an unknown jurisdiction yields the reserved
        codes alone.
        """
        matches = [
            e
            for e in self._by_code.values()
            if e.is_reserved or e.jurisdiction == jurisdiction
        ]
        return sorted(matches, key=lambda e: e.elf_code)


def _split_abbreviations(raw: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in raw.split(";") if part.strip())


def load_registry(
    path: str | Path,
    column_map: "dict[str, str] | str | Path | None" = None,
) -> ElfRegistry:
    """Load the code-list CSV.

    ``column_map`` may be a mapping or the path of a key=value file; keys
    it does not mention keep their defaults. Duplicate codes and rows with
    malformed codes are hard errors: a broken code list would silently
    poison every downstream label.
    """
    if isinstance(column_map, (str, Path)):
        column_map = read_kv_config(column_map)
    columns = dict(DEFAULT_ELF_COLUMNS)
    if column_map:
        unknown = set(column_map) - set(columns)
        if unknown:
            raise ValueError(f"unknown column-map fields: {sorted(unknown)}")
        columns.update(column_map)

    entries: list[ElfRegistryEntry] = []
    seen: set[str] = set()
    with open(path, newline="", encoding="utf-8-sig") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise MissingColumnError(f"{path}: empty file, no header row")
        missing = [c for c in columns.values() if c not in reader.fieldnames]
        if missing:
            raise MissingColumnError(f"{path}: missing columns {missing}")
        for row_number, row in enumerate(reader, start=2):
            code = (row[columns["elf_code"]] or "").strip().upper()
            if not is_valid_elf_code(code):
                raise MalformedRowError(row_number, f"bad ELF code {code!r}")
            if code in seen:
                raise DuplicateCodeError(f"row {row_number}: duplicate ELF code {code}")
            seen.add(code)
            reserved = code in RESERVED_CODES
            subdivision = (row[columns["subdivision_code"]] or "").strip().upper()
            country = (row[columns["country_code"]] or "").strip().upper()
            jurisdiction = "" if reserved else (subdivision or country)
            if jurisdiction and not is_valid_jurisdiction(jurisdiction):
                raise MalformedRowError(row_number, f"bad jurisdiction {jurisdiction!r}")
            status = (row[columns["status"]] or "").strip().upper() or "ACTV"
            if status not in ("ACTV", "INAC"):
                raise MalformedRowError(row_number, f"bad status {status!r}")
            entries.append(
                ElfRegistryEntry(
                    elf_code=code,
                    jurisdiction=jurisdiction,
                    local_name=(row[columns["local_name"]] or "").strip(),
                    language=(row[columns["language"]] or "").strip(),
                    abbreviations=_split_abbreviations(row[columns["abbreviations"]] or ""),
                    status=status,
                    is_reserved=reserved,
                )
            )
    return ElfRegistry(entries)
