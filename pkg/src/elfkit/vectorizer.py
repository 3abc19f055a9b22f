"""Binary bag-of-words features over whitespace tokens.

The vocabulary is the set of words seen in training, in first-occurrence
order. A name is represented by the *set* of vocabulary indices present in
it: each word counts once no matter how often it repeats, and word order
is discarded. Vectors are kept sparse throughout; materializing dense
rows of vocabulary dimension is out of the question at realistic sizes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse
from sklearn.base import BaseEstimator, TransformerMixin

from .preprocessing import tokenize

__all__ = [
    "Vocabulary",
    "BowVector",
    "fit_vocabulary",
    "vectorize",
    "BinaryBowVectorizer",
]


@dataclass(frozen=True)
class Vocabulary:
    """Ordered word list with its inverse index."""

    words: tuple[str, ...]
    index: dict[str, int] = field(repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        if not self.index and self.words:
            object.__setattr__(
                self, "index", {w: i for i, w in enumerate(self.words)}
            )
        if len(self.index) != len(self.words):
            raise ValueError("vocabulary words are not unique")

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.index


@dataclass(frozen=True)
class BowVector:
    """Sparse binary presence vector: sorted vocabulary indices."""

    present: tuple[int, ...]
    dimension: int

    def __post_init__(self):
        if any(not 0 <= i < self.dimension for i in self.present):
            raise ValueError("index out of vocabulary range")
        if any(a >= b for a, b in zip(self.present, self.present[1:])):
            raise ValueError("indices must be strictly increasing")


def fit_vocabulary(token_lists: Iterable[Sequence[str]]) -> Vocabulary:
    """Collect every distinct token, in first-occurrence order.

    Must only ever be fed training samples; building it from anything that
    is later used for testing leaks the test fold's words.
    """
    index: dict[str, int] = {}
    for tokens in token_lists:
        for token in tokens:
            if token not in index:
                index[token] = len(index)
    return Vocabulary(words=tuple(index), index=index)


def vectorize(tokens: Sequence[str], vocab: Vocabulary) -> BowVector:
    """Binary presence vector for one token list.

    Out-of-vocabulary tokens are dropped silently; duplicates count once.
    """
    present = sorted({vocab.index[t] for t in tokens if t in vocab.index})
    return BowVector(present=tuple(present), dimension=len(vocab))


def bow_to_csr(vectors: Sequence[BowVector], dimension: int | None = None) -> sparse.csr_matrix:
    """Stack presence vectors into a binary CSR matrix."""
    if dimension is None:
        if not vectors:
            raise ValueError("dimension required for an empty vector list")
        dimension = vectors[0].dimension
    indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
    for i, vec in enumerate(vectors):
        if vec.dimension != dimension:
            raise ValueError("mixed vector dimensions")
        indptr[i + 1] = indptr[i] + len(vec.present)
    indices = np.fromiter(
        (i for vec in vectors for i in vec.present), dtype=np.int64, count=indptr[-1]
    )
    data = np.ones(indptr[-1], dtype=np.float64)
    return sparse.csr_matrix(
        (data, indices, indptr), shape=(len(vectors), dimension)
    )


class BinaryBowVectorizer(BaseEstimator, TransformerMixin):
    """Fit a vocabulary on normalized names and emit binary CSR matrices.

    Input is an iterable of already-normalized name strings; tokenization
    is the plain whitespace split used everywhere in this package.

    Attributes
    ----------
    vocabulary_ : Vocabulary
        Fitted word index, in first-occurrence order over the training
        input.
    """

    def fit(self, X: Iterable[str], y=None):
        self.vocabulary_ = fit_vocabulary(tokenize(name) for name in X)
        return self

    def transform(self, X: Iterable[str]) -> sparse.csr_matrix:
        vocab = self.vocabulary_
        indptr = [0]
        indices: list[int] = []
        for name in X:
            row = sorted(
                {vocab.index[t] for t in tokenize(name) if t in vocab.index}
            )
            indices.extend(row)
            indptr.append(len(indices))
        data = np.ones(len(indices), dtype=np.float64)
        return sparse.csr_matrix(
            (data, np.asarray(indices, dtype=np.int64), np.asarray(indptr, dtype=np.int64)),
            shape=(len(indptr) - 1, len(vocab)),
        )

    def transform_one(self, name: str) -> BowVector:
        return vectorize(tokenize(name), self.vocabulary_)
