"""Per-user documents and LDA topic modeling by collapsed Gibbs sampling."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _lda_kernels
from .corpus import DataError, Tweet, tokenize

LDA_DUMP_MAGIC = "JOBTALK-LDA v1"


@dataclass
class UserDocument:
    account_id: str
    tokens: list[str]

    @property
    def length(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class LdaConfig:
    num_topics: int = 20
    alpha: Optional[float] = None  # defaults to 50 / num_topics
    beta: float = 0.01
    iterations: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.num_topics < 2:
            raise DataError("num_topics must be >= 2")
        if (self.alpha is not None and self.alpha <= 0) or self.beta <= 0:
            raise DataError("alpha and beta must be positive")

    @property
    def effective_alpha(self) -> float:
        return self.alpha if self.alpha is not None else 50.0 / self.num_topics


@dataclass
class TopicModel:
    topic_word: np.ndarray  # K x V counts
    doc_topic: np.ndarray  # D x K counts
    topic_counts: np.ndarray  # K
    assignments: np.ndarray  # topic per token position
    vocabulary: list[str]
    config: LdaConfig
    log_likelihoods: list[float] = field(default_factory=list)

    @property
    def num_topics(self) -> int:
        return self.topic_word.shape[0]

    def phi(self) -> np.ndarray:
        """Smoothed topic-word distributions; rows sum to 1."""
        beta = self.config.beta
        counts = self.topic_word + beta
        return counts / counts.sum(axis=1, keepdims=True)

    def theta(self) -> np.ndarray:
        """Smoothed document-topic distributions; rows sum to 1."""
        alpha = self.config.effective_alpha
        counts = self.doc_topic + alpha
        return counts / counts.sum(axis=1, keepdims=True)


def build_user_documents(
    tweets: Iterable[Tweet], min_length: int = 5
) -> tuple[list[UserDocument], int]:
    """Concatenate each account's tweets (input order preserved) into one
    document; documents shorter than min_length are dropped and counted."""
    by_account: dict[str, list[str]] = {}
    for t in tweets:
        by_account.setdefault(t.account_id, []).extend(tokenize(t.text))
    docs = []
    dropped = 0
    for account_id in sorted(by_account):
        tokens = by_account[account_id]
        if len(tokens) < min_length:
            dropped += 1
            continue
        docs.append(UserDocument(account_id, tokens))
    return docs, dropped


def default_stoplist(
    docs: Sequence[UserDocument], top_n: int = 50
) -> frozenset[str]:
    """The top_n most frequent corpus tokens (ties by lexicographic order)."""
    counts = Counter()
    for doc in docs:
        counts.update(doc.tokens)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return frozenset(tok for tok, _ in ranked[:top_n])


def remove_stopwords(
    docs: Sequence[UserDocument], stoplist: Optional[frozenset[str]] = None,
    top_n: int = 50,
) -> list[UserDocument]:
    if stoplist is None:
        stoplist = default_stoplist(docs, top_n)
    return [
        UserDocument(d.account_id,
                     [t for t in d.tokens if t not in stoplist])
        for d in docs
    ]


def _encode(docs: Sequence[UserDocument]):
    vocabulary = sorted({tok for d in docs for tok in d.tokens})
    index = {tok: i for i, tok in enumerate(vocabulary)}
    doc_ids = []
    word_ids = []
    for d_idx, doc in enumerate(docs):
        for tok in doc.tokens:
            doc_ids.append(d_idx)
            word_ids.append(index[tok])
    return (
        vocabulary,
        np.array(doc_ids, dtype=np.int32),
        np.array(word_ids, dtype=np.int32),
    )


def check_count_invariants(model: TopicModel) -> None:
    """Count-matrix consistency after a sweep; raises on violation."""
    per_topic = np.bincount(model.assignments,
                            minlength=model.num_topics)
    if not np.array_equal(model.topic_word.sum(axis=1), per_topic):
        raise AssertionError("topic_word marginals disagree with assignments")
    if not np.array_equal(model.topic_counts, per_topic):
        raise AssertionError("topic_counts disagree with assignments")
    if model.topic_word.sum() != len(model.assignments):
        raise AssertionError("total counts disagree with token count")


def corpus_log_likelihood(model: TopicModel) -> float:
    """Collapsed log p(w | z) under the symmetric beta prior."""
    beta = model.config.beta
    K, V = model.topic_word.shape
    ll = K * (math.lgamma(V * beta) - V * math.lgamma(beta))
    for k in range(K):
        ll -= math.lgamma(model.topic_counts[k] + V * beta)
        row = model.topic_word[k]
        for v in np.nonzero(row)[0]:
            ll += math.lgamma(row[v] + beta)
    return ll


def fit_lda(
    docs: Sequence[UserDocument],
    config: LdaConfig = LdaConfig(),
    track_likelihood: bool = False,
    check_invariants_every: int = 0,
) -> TopicModel:
    """Collapsed Gibbs sampling with symmetric Dirichlet priors.
    Deterministic for a given seed regardless of kernel backend."""
    docs = [d for d in docs if d.length > 0]
    if not docs:
        raise DataError("empty corpus")
    vocabulary, doc_ids, word_ids = _encode(docs)
    if len(vocabulary) < config.num_topics:
        raise DataError(
            f"corpus has {len(vocabulary)} distinct tokens; "
            f"need at least num_topics={config.num_topics}"
        )
    K = config.num_topics
    V = len(vocabulary)
    D = len(docs)
    n_tokens = len(word_ids)
    rng = np.random.default_rng(config.seed)
    z = rng.integers(0, K, size=n_tokens).astype(np.int32)
    doc_topic = np.zeros((D, K), dtype=np.int64)
    topic_word = np.zeros((K, V), dtype=np.int64)
    topic_counts = np.zeros(K, dtype=np.int64)
    for t in range(n_tokens):
        doc_topic[doc_ids[t], z[t]] += 1
        topic_word[z[t], word_ids[t]] += 1
        topic_counts[z[t]] += 1
    model = TopicModel(
        topic_word=topic_word,
        doc_topic=doc_topic,
        topic_counts=topic_counts,
        assignments=z,
        vocabulary=vocabulary,
        config=config,
    )
    alpha = config.effective_alpha
    for sweep in range(config.iterations):
        uniforms = rng.random(n_tokens)
        _lda_kernels.gibbs_sweep(
            doc_ids, word_ids, z, doc_topic, topic_word, topic_counts,
            alpha, config.beta, uniforms,
        )
        if check_invariants_every and (sweep + 1) % check_invariants_every == 0:
            check_count_invariants(model)
        if track_likelihood:
            model.log_likelihoods.append(corpus_log_likelihood(model))
    return model


def top_words(model: TopicModel, topic_index: int, k: int = 12) -> list[str]:
    """k highest smoothed-probability words; ties break lexicographically."""
    if not 0 <= topic_index < model.num_topics:
        raise DataError(f"topic index out of range: {topic_index}")
    row = model.topic_word[topic_index] + model.config.beta
    ranked = sorted(
        zip(model.vocabulary, row), key=lambda wv: (-wv[1], wv[0])
    )
    return [w for w, _ in ranked[:k]]


def topic_report(model: TopicModel, k: int = 12) -> list[dict]:
    total = int(model.topic_counts.sum())
    return [
        {
            "topic_index": i,
            "top_words": top_words(model, i, k),
            "token_share": (
                int(model.topic_counts[i]) / total if total else 0.0
            ),
        }
        for i in range(model.num_topics)
    ]


def write_topic_report(model: TopicModel, path, k: int = 12) -> None:
    Path(path).write_text(
        json.dumps(topic_report(model, k), indent=2), encoding="utf-8"
    )


def save_topic_model(model: TopicModel, path) -> None:
    """Versioned flat dump of both count matrices and the vocabulary."""
    with open(path, "wb") as fh:
        cfg = model.config
        header = (
            f"{LDA_DUMP_MAGIC}\n"
            f"topics {model.num_topics}\n"
            f"docs {model.doc_topic.shape[0]}\n"
            f"vocab {len(model.vocabulary)}\n"
            f"alpha {cfg.effective_alpha!r}\n"
            f"beta {cfg.beta!r}\n"
            f"seed {cfg.seed}\n"
        )
        fh.write(header.encode("utf-8"))
        for word in model.vocabulary:
            fh.write(word.encode("utf-8") + b"\n")
        fh.write(b"COUNTS\n")
        fh.write(model.topic_word.astype("<i8").tobytes())
        fh.write(model.doc_topic.astype("<i8").tobytes())


def load_topic_model(path) -> TopicModel:
    blob = Path(path).read_bytes()
    try:
        sep = blob.index(b"COUNTS\n")
        lines = blob[:sep].decode("utf-8").splitlines()
        if lines[0] != LDA_DUMP_MAGIC:
            raise DataError(
                f"unrecognized topic model header: {lines[0]!r}"
            )
        meta = dict(line.split(" ", 1) for line in lines[1:7])
        K = int(meta["topics"])
        D = int(meta["docs"])
        V = int(meta["vocab"])
        vocabulary = lines[7 : 7 + V]
        payload = blob[sep + len(b"COUNTS\n") :]
        topic_word = np.frombuffer(
            payload[: K * V * 8], dtype="<i8"
        ).reshape(K, V)
        doc_topic = np.frombuffer(
            payload[K * V * 8 : K * V * 8 + D * K * 8], dtype="<i8"
        ).reshape(D, K)
    except (ValueError, KeyError, IndexError, UnicodeDecodeError) as exc:
        raise DataError(f"malformed topic model file {path}: {exc}") from exc
    topic_word = topic_word.astype(np.int64)
    doc_topic = doc_topic.astype(np.int64)
    config = LdaConfig(
        num_topics=K, alpha=float(meta["alpha"]), beta=float(meta["beta"]),
        iterations=1, seed=int(meta["seed"]),
    )
    return TopicModel(
        topic_word=topic_word,
        doc_topic=doc_topic,
        topic_counts=topic_word.sum(axis=1),
        assignments=np.array([], dtype=np.int32),
        vocabulary=vocabulary,
        config=config,
    )
