import hashlib
import struct

import pytest

from elfkit.classifiers import ClassifierSpec
from elfkit.model_store import MAGIC, CorruptModelError, VersionMismatchError, load, save
from elfkit.pipeline import train_pipeline

from conftest import lei, make_dataset


def small_dataset():
    samples = [(lei(i), f"Markt {i % 4} Handel GmbH", "2HBR") for i in range(12)]
    samples += [(lei(i + 20), f"Verbund {i % 3} eG", "AZFE") for i in range(8)]
    samples += [(lei(i + 40), f"Amt {i % 2} Bezirk KdöR", "SQKS") for i in range(5)]
    return make_dataset(samples)


SPECS = [
    ClassifierSpec("cnb", {"alpha": 0.5}),
    ClassifierSpec("dt"),
    ClassifierSpec("rf", {"n_trees": 4}, seed=3),
    ClassifierSpec("linear-svm", {"epochs": 6}, seed=1),
]


@pytest.mark.parametrize("spec", SPECS, ids=lambda s: s.kind)
class TestRoundTrip:
    def test_save_load_save_byte_identical(self, tmp_path, spec):
        pipeline = train_pipeline(small_dataset(), spec, mode="extended", created_at="2022-09-14T08:00:00Z")
        first = tmp_path / "a.model"
        second = tmp_path / "b.model"
        save(pipeline, first)
        save(load(first), second)
        assert first.read_bytes() == second.read_bytes()

    def test_prediction_equivalence(self, tmp_path, spec):
        pipeline = train_pipeline(small_dataset(), spec, mode="extended")
        path = tmp_path / "m.model"
        save(pipeline, path)
        loaded = load(path)
        queries = ["Neue Markt GmbH", "Verbund Kasse eG", "Unbekannt", "Amt Bezirk KdöR"]
        for name in queries:
            assert loaded.classify(name) == pipeline.classify(name)
            assert loaded.classify_topk(name, 3) == pipeline.classify_topk(name, 3)

    def test_metadata_preserved(self, tmp_path, spec):
        pipeline = train_pipeline(
            small_dataset(), spec, mode="lower", created_at="2024-01-01T00:00:00Z"
        )
        path = tmp_path / "m.model"
        save(pipeline, path)
        loaded = load(path)
        assert loaded.jurisdiction == "DE"
        assert loaded.training_snapshot_id == "2022-09-14"
        assert loaded.created_at == "2024-01-01T00:00:00Z"
        assert loaded.preprocess_mode.value == "lower"
        assert loaded.class_labels == pipeline.class_labels
        assert loaded.seed == spec.seed


class TestCorruption:
    def _saved(self, tmp_path):
        pipeline = train_pipeline(small_dataset(), ClassifierSpec("cnb"), mode="extended")
        path = tmp_path / "m.model"
        save(pipeline, path)
        return path

    def test_bit_flip_detected(self, tmp_path):
        path = self._saved(tmp_path)
        raw = bytearray(path.read_bytes())
        raw[len(raw) // 2] ^= 0xFF
        path.write_bytes(bytes(raw))
        with pytest.raises(CorruptModelError, match="checksum"):
            load(path)

    def test_truncation_detected(self, tmp_path):
        path = self._saved(tmp_path)
        raw = path.read_bytes()
        path.write_bytes(raw[: len(raw) - 7])
        with pytest.raises(CorruptModelError):
            load(path)

    def test_not_a_model_file(self, tmp_path):
        path = tmp_path / "nope.model"
        path.write_bytes(b"definitely not a model" * 10)
        with pytest.raises(CorruptModelError, match="bad magic"):
            load(path)

    def test_version_bump_rejected(self, tmp_path):
        path = self._saved(tmp_path)
        raw = bytearray(path.read_bytes()[:-32])
        struct.pack_into("<I", raw, len(MAGIC), 99)
        body = bytes(raw)
        path.write_bytes(body + hashlib.sha256(body).digest())
        with pytest.raises(VersionMismatchError, match="format version 99"):
            load(path)

    def test_unwritable_target(self, tmp_path):
        pipeline = train_pipeline(small_dataset(), ClassifierSpec("dt"), mode="lower")
        with pytest.raises(OSError):
            save(pipeline, tmp_path / "missing-dir" / "m.model")
