import csv
import inspect
import itertools

import pytest

from elfkit.ingest import (
    DEFAULT_LEI_COLUMNS,
    IngestStats,
    build_datasets,
    dataset_stats,
    filter_in_scope,
    infer_snapshot_id,
    ingest,
    load_dataset,
    save_dataset,
)
from elfkit.registry import MissingColumnError

from conftest import lei, make_dataset

GOLDEN_HEADER = list(DEFAULT_LEI_COLUMNS.values())


def write_golden(path, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(GOLDEN_HEADER)
        writer.writerows(rows)
    return path


def golden_row(i, name="Dean Quarry Apartments LLC", jurisdiction="US-NY",
               code="SDX0", entity="ACTIVE", registration="ISSUED"):
    return [lei(i), name, jurisdiction, code, entity, registration]


class TestIngest:
    def test_emits_valid_rows(self, tmp_path, registry):
        path = write_golden(tmp_path / "g.csv", [golden_row(1)])
        records = list(ingest(path, registry))
        assert len(records) == 1
        assert records[0].legal_name == "Dean Quarry Apartments LLC"
        assert records[0].jurisdiction == "US-NY"
        assert records[0].elf_code == "SDX0"

    def test_skip_reasons_counted(self, tmp_path, registry):
        rows = [
            golden_row(1),
            golden_row(2, code="AB1"),            # 3-char ELF code
            golden_row(3, name="   "),            # empty name
            [lei(4)[:10], "Short LEI Corp", "US-NY", "SDX0", "ACTIVE", "ISSUED"],
            golden_row(5, jurisdiction="X-99Z"),  # out-of-pattern jurisdiction
        ]
        path = write_golden(tmp_path / "g.csv", rows)
        stats = IngestStats()
        records = list(ingest(path, registry, stats=stats))
        assert len(records) == 1
        assert stats.skipped == {
            "malformed_elf_code": 1,
            "empty_name": 1,
            "malformed_lei": 1,
            "malformed_jurisdiction": 1,
        }
        assert stats.emitted + stats.skipped_total == stats.total_rows == 5

    def test_missing_column_fatal(self, tmp_path, registry):
        path = tmp_path / "g.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["LEI", "Entity.LegalName"])
            writer.writerow([lei(1), "Foo"])
        with pytest.raises(MissingColumnError):
            list(ingest(path, registry))

    def test_extra_columns_tolerated(self, tmp_path, registry):
        path = tmp_path / "g.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["X.Extra"] + GOLDEN_HEADER)
            writer.writerow(["junk"] + golden_row(1))
        assert len(list(ingest(path, registry))) == 1

    def test_unknown_registry_code_kept_but_counted(self, tmp_path, registry):
        path = write_golden(tmp_path / "g.csv", [golden_row(1, code="ZZZ9")])
        stats = IngestStats()
        records = list(ingest(path, registry, stats=stats))
        assert len(records) == 1
        assert stats.unknown_registry_codes == 1

    def test_streaming_is_lazy(self, tmp_path, registry):
        path = write_golden(tmp_path / "g.csv", [golden_row(i) for i in range(50)])
        stream = ingest(path, registry)
        assert inspect.isgenerator(stream)
        first_two = list(itertools.islice(stream, 2))
        assert len(first_two) == 2
        stream.close()

    def test_column_map_remapping(self, tmp_path, registry):
        path = tmp_path / "g.csv"
        header = list(GOLDEN_HEADER)
        header[1] = "LegalName"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerow(golden_row(1))
        records = list(ingest(path, registry, column_map={"legal_name": "LegalName"}))
        assert records[0].legal_name == "Dean Quarry Apartments LLC"


class TestScopeFilter:
    @pytest.mark.parametrize(
        "entity, registration, kept",
        [
            ("ACTIVE", "ISSUED", True),
            ("ACTIVE", "LAPSED", False),
            ("INACTIVE", "ISSUED", False),
            ("NULL", "ISSUED", False),
            ("ACTIVE", "RETIRED", False),
        ],
    )
    def test_conjunction(self, tmp_path, registry, entity, registration, kept):
        path = write_golden(
            tmp_path / "g.csv", [golden_row(1, entity=entity, registration=registration)]
        )
        records = list(filter_in_scope(ingest(path, registry)))
        assert bool(records) is kept


class TestBuildDatasets:
    def _records(self, tmp_path, registry, rows):
        path = write_golden(tmp_path / "g.csv", rows)
        return list(ingest(path, registry))

    def test_grouping_and_lei_order(self, tmp_path, registry):
        rows = [
            golden_row(5, jurisdiction="DE", code="2HBR"),
            golden_row(1, jurisdiction="DE", code="2HBR"),
            golden_row(3, jurisdiction="SE", code="XJHM"),
        ]
        datasets = build_datasets(self._records(tmp_path, registry, rows), top_n=30)
        assert set(datasets) == {"DE", "SE"}
        assert [s.lei for s in datasets["DE"].samples] == [lei(1), lei(5)]
        assert datasets["DE"].class_histogram == {"2HBR": 2}

    def test_order_independence(self, tmp_path, registry):
        rows = [
            golden_row(i, jurisdiction="DE", code="2HBR") for i in range(6)
        ] + [golden_row(i, jurisdiction="SE", code="XJHM") for i in range(6, 10)]
        forward = build_datasets(self._records(tmp_path, registry, rows))
        backward = build_datasets(self._records(tmp_path, registry, rows[::-1]))
        assert forward == backward

    def test_top_n_largest_kept(self, tmp_path, registry):
        rows = (
            [golden_row(i, jurisdiction="DE", code="2HBR") for i in range(5)]
            + [golden_row(i + 10, jurisdiction="SE", code="XJHM") for i in range(3)]
            + [golden_row(i + 20, jurisdiction="JP", code="7QQ0") for i in range(2)]
        )
        datasets = build_datasets(self._records(tmp_path, registry, rows), top_n=2)
        assert set(datasets) == {"DE", "SE"}

    def test_exclusions_cover_sub_jurisdictions(self, tmp_path, registry):
        rows = [
            golden_row(1, jurisdiction="CN", code="2HBR"),
            golden_row(2, jurisdiction="CA", code="2HBR"),
            golden_row(3, jurisdiction="CA-QC", code="2HBR"),
            golden_row(4, jurisdiction="DE", code="2HBR"),
        ]
        datasets = build_datasets(
            self._records(tmp_path, registry, rows), exclusions=("CN", "CA")
        )
        assert set(datasets) == {"DE"}

    def test_histogram_sums(self, tmp_path, registry):
        rows = [golden_row(i, jurisdiction="DE", code="2HBR" if i % 2 else "SQKS") for i in range(9)]
        datasets = build_datasets(self._records(tmp_path, registry, rows))
        dataset = datasets["DE"]
        assert sum(dataset.class_histogram.values()) == len(dataset.samples)


class TestDatasetStats:
    def test_rows_sorted_by_local_name(self, registry):
        dataset = make_dataset(
            [(lei(1), "A GmbH", "2HBR"), (lei(2), "B KdöR", "SQKS"), (lei(3), "C GmbH", "2HBR")]
        )
        rows = dataset_stats(dataset, registry)
        assert rows == [
            ("2HBR", "Gesellschaft mit beschränkter Haftung", 2),
            ("SQKS", "Körperschaft des öffentlichen Rechts", 1),
        ]

    def test_empty_dataset(self, registry):
        assert dataset_stats(make_dataset([]), registry) == []


class TestPersistence:
    def test_tsv_round_trip(self, tmp_path):
        dataset = make_dataset(
            [
                (lei(1), 'Weird "Name"\twith tab, comma', "2HBR"),
                (lei(2), "Ünïcødé 合同会社", "7QQ0"),
            ],
            jurisdiction="DE",
            snapshot_id="2022-09-14",
        )
        path = tmp_path / "DE.tsv"
        save_dataset(dataset, path)
        loaded = load_dataset(path)
        assert loaded == dataset

    def test_jurisdiction_from_stem_without_sidecar(self, tmp_path):
        dataset = make_dataset([(lei(1), "X GmbH", "2HBR")], jurisdiction="SE")
        path = tmp_path / "SE.tsv"
        save_dataset(dataset, path)
        path.with_suffix(".meta.json").unlink()
        loaded = load_dataset(path)
        assert loaded.jurisdiction == "SE"
        assert loaded.snapshot_id == ""

    def test_snapshot_inference(self):
        assert infer_snapshot_id("20220914-0800-gleif-goldencopy.csv") == "2022-09-14"
        assert infer_snapshot_id("plain.csv") == ""
