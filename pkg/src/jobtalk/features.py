"""N-gram featurization: vocabulary building and sparse binary vectors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .corpus import DataError


@dataclass(frozen=True)
class NgramConfig:
    max_n: int = 3
    lowercase: bool = True
    binary_presence: bool = True

    def __post_init__(self):
        if not 1 <= self.max_n <= 3:
            raise DataError("max_n must be between 1 and 3")


def extract_ngrams(
    tokens: Sequence[str], config: NgramConfig = NgramConfig()
) -> set[str]:
    """All contiguous n-grams for n = 1..max_n, space-joined."""
    if config.lowercase:
        tokens = [t.lower() for t in tokens]
    grams = set()
    for n in range(1, config.max_n + 1):
        for i in range(len(tokens) - n + 1):
            grams.add(" ".join(tokens[i : i + n]))
    return grams


class FeatureVocab:
    """Dense n-gram -> index map; frozen vocab rejects new entries."""

    def __init__(self):
        self._index: dict[str, int] = {}
        self.frozen = False

    def __len__(self) -> int:
        return len(self._index)

    def __contains__(self, ngram: str) -> bool:
        return ngram in self._index

    def add(self, ngram: str) -> int:
        if ngram in self._index:
            return self._index[ngram]
        if self.frozen:
            raise DataError(f"vocab is frozen; cannot add {ngram!r}")
        idx = len(self._index)
        self._index[ngram] = idx
        return idx

    def get(self, ngram: str) -> int | None:
        return self._index.get(ngram)

    def freeze(self) -> "FeatureVocab":
        self.frozen = True
        return self

    def items(self):
        return self._index.items()

    @classmethod
    def from_items(cls, items: Iterable[tuple[str, int]]) -> "FeatureVocab":
        vocab = cls()
        pairs = sorted(items, key=lambda kv: kv[1])
        for pos, (ngram, idx) in enumerate(pairs):
            if idx != pos:
                raise DataError("vocab indices must be dense 0..V-1")
            vocab._index[ngram] = idx
        vocab.frozen = True
        return vocab


@dataclass
class SparseVector:
    indices: np.ndarray  # strictly increasing int32
    values: np.ndarray  # finite float64

    def __post_init__(self):
        self.indices = np.asarray(self.indices, dtype=np.int32)
        self.values = np.asarray(self.values, dtype=np.float64)
        if len(self.indices) != len(self.values):
            raise DataError("indices and values length mismatch")
        if len(self.indices) > 1 and not np.all(np.diff(self.indices) > 0):
            raise DataError("indices must be strictly increasing")
        if not np.all(np.isfinite(self.values)):
            raise DataError("values must be finite")

    @property
    def nnz(self) -> int:
        return len(self.indices)


def build_vocab(
    token_lists: Iterable[Sequence[str]], config: NgramConfig = NgramConfig()
) -> FeatureVocab:
    vocab = FeatureVocab()
    for tokens in token_lists:
        for gram in sorted(extract_ngrams(tokens, config)):
            vocab.add(gram)
    return vocab.freeze()


def vectorize(
    tokens: Sequence[str],
    vocab: FeatureVocab,
    config: NgramConfig = NgramConfig(),
) -> SparseVector:
    """Binary presence vector over the vocab; out-of-vocab n-grams drop."""
    idxs = sorted(
        idx
        for gram in extract_ngrams(tokens, config)
        if (idx := vocab.get(gram)) is not None
    )
    return SparseVector(
        indices=np.array(idxs, dtype=np.int32),
        values=np.ones(len(idxs), dtype=np.float64),
    )


def to_csr(
    vectors: Sequence[SparseVector], n_features: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Pack sparse vectors into CSR arrays (indptr, indices, data)."""
    indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
    for i, v in enumerate(vectors):
        indptr[i + 1] = indptr[i] + v.nnz
    indices = np.empty(indptr[-1], dtype=np.int32)
    data = np.empty(indptr[-1], dtype=np.float64)
    for i, v in enumerate(vectors):
        indices[indptr[i] : indptr[i + 1]] = v.indices
        data[indptr[i] : indptr[i + 1]] = v.values
    return indptr, indices, data
