"""Single-file persistence for trained pipelines.

Layout: a 4-byte magic, a little-endian u32 format version, one
length-prefixed JSON header, the binary parameter blobs the header
declares (length-prefixed, fixed little-endian dtypes), and a trailing
SHA-256 over everything before it. All numeric parameters travel as
64-bit values in fixed byte order, so saving, loading and saving again
reproduces the file byte for byte on any platform.
"""

from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path

import numpy as np

from .classifiers.cnb import ComplementNaiveBayes
from .classifiers.forest import RandomForestWordClassifier
from .classifiers.svm import LinearSvmClassifier
from .classifiers.tree import DecisionTreeWordClassifier, _TreeArrays
from .pipeline import FORMAT_VERSION, LegalFormClassifier, TrainedPipeline
from .vectorizer import BinaryBowVectorizer, Vocabulary

__all__ = ["save", "load", "CorruptModelError", "VersionMismatchError", "MAGIC"]

MAGIC = b"ELFM"

_DTYPES = {"f8": "<f8", "i8": "<i8"}


class CorruptModelError(Exception):
    pass


class VersionMismatchError(Exception):
    pass


def _tree_blobs(tree: _TreeArrays, prefix: str, blobs: dict[str, np.ndarray]):
    blobs[f"{prefix}.feature"] = tree.feature
    blobs[f"{prefix}.child_absent"] = tree.child_absent
    blobs[f"{prefix}.child_present"] = tree.child_present
    blobs[f"{prefix}.counts_index"] = tree.counts_index
    blobs[f"{prefix}.leaf_counts"] = tree.leaf_counts


def _tree_from_blobs(prefix: str, blobs: dict[str, np.ndarray], n_classes: int) -> _TreeArrays:
    return _TreeArrays(
        feature=blobs[f"{prefix}.feature"],
        child_absent=blobs[f"{prefix}.child_absent"],
        child_present=blobs[f"{prefix}.child_present"],
        counts_index=blobs[f"{prefix}.counts_index"],
        leaf_counts=blobs[f"{prefix}.leaf_counts"].reshape(-1, n_classes),
    )


def _export_classifier(clf) -> tuple[dict, dict[str, np.ndarray]]:
    blobs: dict[str, np.ndarray] = {}
    if isinstance(clf, ComplementNaiveBayes):
        header = {"kind": "cnb", "alpha": clf.alpha}
        blobs["feature_weights"] = clf.feature_weights_
    elif isinstance(clf, DecisionTreeWordClassifier):
        header = {"kind": "dt", "seed": _seed_repr(clf.seed), "feature_subsample": clf.feature_subsample}
        _tree_blobs(clf.tree_, "tree", blobs)
    elif isinstance(clf, RandomForestWordClassifier):
        header = {
            "kind": "rf",
            "seed": _seed_repr(clf.seed),
            "n_trees": clf.n_trees,
            "bootstrap": clf.bootstrap,
        }
        for t, tree in enumerate(clf.trees_):
            _tree_blobs(tree, f"tree{t}", blobs)
    elif isinstance(clf, LinearSvmClassifier):
        header = {
            "kind": "linear-svm",
            "seed": _seed_repr(clf.seed),
            "epochs": clf.epochs,
            "regularization": clf.regularization,
        }
        blobs["coef"] = clf.coef_
        blobs["intercept"] = clf.intercept_
    else:
        raise TypeError(f"cannot persist classifier {type(clf).__name__}")
    return header, blobs


def _seed_repr(seed) -> int:
    # SeedSequence-typed seeds (internal test hooks) reduce to their entropy.
    if isinstance(seed, np.random.SeedSequence):
        return int(seed.entropy)
    return int(seed)


def _import_classifier(header: dict, blobs: dict[str, np.ndarray], classes: np.ndarray, n_features: int):
    kind = header["kind"]
    if kind == "cnb":
        clf = ComplementNaiveBayes(alpha=header["alpha"])
        clf.feature_weights_ = blobs["feature_weights"].reshape(len(classes), n_features)
    elif kind == "dt":
        clf = DecisionTreeWordClassifier(
            feature_subsample=header["feature_subsample"], seed=header["seed"]
        )
        clf.tree_ = _tree_from_blobs("tree", blobs, len(classes))
    elif kind == "rf":
        clf = RandomForestWordClassifier(
            n_trees=header["n_trees"], seed=header["seed"], bootstrap=header["bootstrap"]
        )
        clf.trees_ = [
            _tree_from_blobs(f"tree{t}", blobs, len(classes)) for t in range(header["n_trees"])
        ]
    elif kind == "linear-svm":
        clf = LinearSvmClassifier(
            epochs=header["epochs"],
            regularization=header["regularization"],
            seed=header["seed"],
        )
        clf.coef_ = blobs["coef"].reshape(len(classes), n_features)
        clf.intercept_ = blobs["intercept"]
    else:
        raise CorruptModelError(f"unknown classifier kind {kind!r}")
    clf.classes_ = classes
    clf.n_features_in_ = n_features
    return clf


def save(pipeline: TrainedPipeline, path: str | Path) -> None:
    """Write one self-describing model file with an embedded checksum."""
    clf_header, arrays = _export_classifier(pipeline.model.classifier_)
    vocab_bytes = "\n".join(pipeline.vocabulary.words).encode("utf-8")

    blob_order = []
    payloads = []
    for name, arr in arrays.items():
        code = "i8" if arr.dtype.kind == "i" else "f8"
        arr = np.ascontiguousarray(arr)
        blob_order.append({"name": name, "dtype": code, "shape": list(arr.shape)})
        payloads.append(arr.astype(_DTYPES[code]).tobytes())
    blob_order.append({"name": "vocabulary", "dtype": "utf8", "shape": [len(pipeline.vocabulary)]})
    payloads.append(vocab_bytes)

    header = {
        "format_version": pipeline.format_version,
        "jurisdiction": pipeline.jurisdiction,
        "preprocess_mode": pipeline.model.prep,
        "classifier": clf_header,
        "class_labels": list(pipeline.class_labels),
        "n_features": len(pipeline.vocabulary),
        "training_snapshot_id": pipeline.training_snapshot_id,
        "seed": pipeline.seed,
        "created_at": pipeline.created_at,
        "blobs": blob_order,
    }
    header_bytes = json.dumps(header, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")

    digest = hashlib.sha256()
    with open(path, "wb") as fh:
        def emit(chunk: bytes):
            digest.update(chunk)
            fh.write(chunk)

        emit(MAGIC)
        emit(struct.pack("<I", pipeline.format_version))
        emit(struct.pack("<Q", len(header_bytes)))
        emit(header_bytes)
        for payload in payloads:
            emit(struct.pack("<Q", len(payload)))
            emit(payload)
        fh.write(digest.digest())


def load(path: str | Path) -> TrainedPipeline:
    """Read a model file back into a usable pipeline.

    Raises ``VersionMismatchError`` for any other format version and
    ``CorruptModelError`` when the checksum or structure does not hold.
    """
    raw = Path(path).read_bytes()
    if len(raw) < len(MAGIC) + 4 + 8 + 32:
        raise CorruptModelError(f"{path}: truncated file")
    if raw[: len(MAGIC)] != MAGIC:
        raise CorruptModelError(f"{path}: bad magic, not a model file")
    body, checksum = raw[:-32], raw[-32:]
    if hashlib.sha256(body).digest() != checksum:
        raise CorruptModelError(f"{path}: checksum mismatch")

    offset = len(MAGIC)
    (version,) = struct.unpack_from("<I", body, offset)
    offset += 4
    if version != FORMAT_VERSION:
        raise VersionMismatchError(
            f"{path}: format version {version}, this build reads {FORMAT_VERSION}"
        )
    (header_len,) = struct.unpack_from("<Q", body, offset)
    offset += 8
    try:
        header = json.loads(body[offset: offset + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorruptModelError(f"{path}: unreadable header: {exc}") from exc
    offset += header_len

    blobs: dict[str, np.ndarray] = {}
    vocab_words: tuple[str, ...] = ()
    for descriptor in header["blobs"]:
        (nbytes,) = struct.unpack_from("<Q", body, offset)
        offset += 8
        chunk = body[offset: offset + nbytes]
        if len(chunk) != nbytes:
            raise CorruptModelError(f"{path}: blob {descriptor['name']} truncated")
        offset += nbytes
        if descriptor["dtype"] == "utf8":
            text = chunk.decode("utf-8")
            vocab_words = tuple(text.split("\n")) if text else ()
        else:
            arr = np.frombuffer(chunk, dtype=_DTYPES[descriptor["dtype"]]).copy()
            blobs[descriptor["name"]] = arr.reshape(descriptor["shape"])
    if offset != len(body):
        raise CorruptModelError(f"{path}: {len(body) - offset} trailing bytes")

    classes = np.asarray(header["class_labels"], dtype=object)
    classifier = _import_classifier(header["classifier"], blobs, classes, header["n_features"])

    model = LegalFormClassifier(
        model=header["classifier"]["kind"],
        prep=header["preprocess_mode"],
        seed=header["seed"],
    )
    vectorizer = BinaryBowVectorizer()
    vectorizer.vocabulary_ = Vocabulary(words=vocab_words)
    model.vectorizer_ = vectorizer
    model.classifier_ = classifier
    model.classes_ = classes
    return TrainedPipeline(
        jurisdiction=header["jurisdiction"],
        model=model,
        training_snapshot_id=header["training_snapshot_id"],
        seed=header["seed"],
        created_at=header["created_at"],
        format_version=header["format_version"],
    )
