import csv

import pytest

from elfkit.registry import (
    DuplicateCodeError,
    MalformedRowError,
    MissingColumnError,
    UnknownCodeError,
    is_valid_elf_code,
    is_valid_jurisdiction,
    load_registry,
)

from conftest import ELF_LIST_HEADER, US_DE_FORMS, write_elf_list


class TestCodeValidation:
    @pytest.mark.parametrize("code", ["HZEH", "2HBR", "8888", "12N6"])
    def test_valid_codes(self, code):
        assert is_valid_elf_code(code)

    @pytest.mark.parametrize("code", ["", "AB", "ABCDE", "ab12", "A B1", "A-12"])
    def test_invalid_codes(self, code):
        assert not is_valid_elf_code(code)

    @pytest.mark.parametrize("jur", ["DE", "US-DE", "US-NY", "JP", "CH-1X"])
    def test_valid_jurisdictions(self, jur):
        assert is_valid_jurisdiction(jur)

    @pytest.mark.parametrize("jur", ["", "D", "DEU", "US-", "US-D", "US-DEL", "us-de"])
    def test_invalid_jurisdictions(self, jur):
        assert not is_valid_jurisdiction(jur)


class TestLoad:
    def test_entry_retrievable_by_code(self, registry):
        entry = registry.resolve("HZEH")
        assert entry.jurisdiction == "US-DE"
        assert entry.local_name == "Limited Liability Company"

    def test_reserved_codes_synthesized(self, registry):
        for code in ("8888", "9999"):
            entry = registry.resolve(code)
            assert entry.is_reserved
            assert entry.jurisdiction == ""

    def test_resolve_gmbh(self, registry):
        entry = registry.resolve("2HBR")
        assert entry.local_name == "Gesellschaft mit beschränkter Haftung"
        assert entry.jurisdiction == "DE"

    def test_unknown_code(self, registry):
        with pytest.raises(UnknownCodeError):
            registry.resolve("0000")

    def test_header_only_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            csv.writer(fh).writerow(ELF_LIST_HEADER)
        registry = load_registry(path)
        assert len(registry) == 0
        assert registry.resolve("8888").is_reserved  # reserved still resolvable

    def test_duplicate_code_rejected(self, tmp_path):
        path = write_elf_list(
            tmp_path / "dup.csv",
            extra_rows=[["2HBR", "AT", "", "Doppelte Form", "German", "", "ACTV"]],
        )
        with pytest.raises(DuplicateCodeError):
            load_registry(path)

    def test_malformed_code_reports_row(self, tmp_path):
        path = write_elf_list(
            tmp_path / "bad.csv",
            extra_rows=[["NOPE!", "DE", "", "Kaputt", "German", "", "ACTV"]],
        )
        with pytest.raises(MalformedRowError) as excinfo:
            load_registry(path)
        assert excinfo.value.row_number == 21  # header + 19 valid rows before it

    def test_missing_column(self, tmp_path):
        path = tmp_path / "short.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["ELF Code", "Entity Legal Form name Local name"])
            writer.writerow(["2HBR", "GmbH"])
        with pytest.raises(MissingColumnError):
            load_registry(path)

    def test_abbreviations_split_and_trimmed(self, registry):
        assert registry.resolve("2HBR").abbreviations == ("GmbH", "GesmbH")
        assert registry.resolve("V2YH").abbreviations == ()

    def test_inactive_forms_loaded_and_flagged(self, registry):
        entry = registry.resolve("54M6")
        assert entry.status == "INAC"

    def test_column_map_file(self, tmp_path):
        path = tmp_path / "renamed.csv"
        rows = [["2HBR", "DE", "", "Gesellschaft mit beschränkter Haftung", "German", "GmbH", "ACTV"]]
        header = list(ELF_LIST_HEADER)
        header[0] = "Code"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)
        mapping = tmp_path / "map.cfg"
        mapping.write_text("elf_code = Code\n# comment line\n", encoding="utf-8")
        registry = load_registry(path, column_map=mapping)
        assert registry.resolve("2HBR").jurisdiction == "DE"

    def test_unknown_column_map_field(self, elf_list_csv):
        with pytest.raises(ValueError, match="unknown column-map fields"):
            load_registry(elf_list_csv, column_map={"nonsense": "X"})


class TestQueries:
    def test_us_de_includes_published_forms(self, registry):
        entries = registry.codes_for_jurisdiction("US-DE")
        codes = [e.elf_code for e in entries]
        for expected in ("XTIQ", "HZEH", "T91T"):
            assert expected in codes
        named = [e for e in entries if not e.is_reserved]
        assert len(named) == len(US_DE_FORMS)
        assert "8888" in codes

    def test_sorted_by_code(self, registry):
        codes = [e.elf_code for e in registry.codes_for_jurisdiction("US-DE")]
        assert codes == sorted(codes)

    def test_unknown_jurisdiction_reserved_only(self, registry):
        entries = registry.codes_for_jurisdiction("ZZ")
        assert [e.elf_code for e in entries] == ["8888", "9999"]
        assert all(e.is_reserved for e in entries)

    def test_us_ny_contains_sdx0(self, registry):
        assert "SDX0" in [e.elf_code for e in registry.codes_for_jurisdiction("US-NY")]

    def test_resolve_round_trip(self, registry):
        for entry in registry:
            assert registry.resolve(entry.elf_code) == entry

    def test_jurisdiction_partition(self, registry):
        seen = {}
        jurisdictions = {e.jurisdiction for e in registry if not e.is_reserved}
        for jurisdiction in jurisdictions:
            for entry in registry.codes_for_jurisdiction(jurisdiction):
                if entry.is_reserved:
                    continue
                assert entry.elf_code not in seen, "entry appears for two jurisdictions"
                seen[entry.elf_code] = jurisdiction
        assert len(seen) == sum(1 for e in registry if not e.is_reserved)

    def test_load_deterministic(self, elf_list_csv):
        first = list(load_registry(elf_list_csv))
        second = list(load_registry(elf_list_csv))
        assert first == second
