"""Class-weighted linear SVM: training, scoring, cross-validated grid
search, evaluation, feature inspection, and round-2 sample selection."""

from __future__ import annotations

import math
import random
import struct
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _svm_kernels
from .corpus import DataError
from .features import FeatureVocab, SparseVector, to_csr

MODEL_MAGIC = "JOBTALK-MODEL"
MODEL_VERSION = 1

DEFAULT_C_GRID = (0.01, 0.1, 1.0, 10.0)
DEFAULT_RATIO_GRID = (0.25, 0.5, 1.0, 2.0, 4.0)


@dataclass(frozen=True)
class TrainConfig:
    C: float = 1.0
    class_weight_ratio: float = 1.0  # weight on positives / weight on negatives
    max_epochs: int = 300
    tolerance: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.C <= 0:
            raise DataError("C must be positive")
        if self.class_weight_ratio <= 0:
            raise DataError("class_weight_ratio must be positive")


@dataclass
class LinearModel:
    weights: np.ndarray
    bias: float
    vocab: FeatureVocab
    train_config: TrainConfig
    objective_history: list[float] = field(default_factory=list)

    @property
    def weight_norm(self) -> float:
        return float(np.linalg.norm(self.weights))


@dataclass(frozen=True)
class ConfidenceScore:
    """Signed geometric distance to the separating hyperplane."""

    value: float

    @property
    def predicted_positive(self) -> bool:
        return self.value >= 0


@dataclass
class EvalReport:
    tp: int
    fp: int
    fn: int
    tn: int

    @staticmethod
    def _prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
        p = tp / (tp + fp) if tp + fp else 0.0
        r = tp / (tp + fn) if tp + fn else 0.0
        f = 2 * p * r / (p + r) if p + r else 0.0
        return p, r, f

    @property
    def positive(self) -> tuple[float, float, float]:
        return self._prf(self.tp, self.fp, self.fn)

    @property
    def negative(self) -> tuple[float, float, float]:
        return self._prf(self.tn, self.fn, self.fp)

    def as_dict(self) -> dict:
        pp, pr, pf = self.positive
        np_, nr, nf = self.negative
        return {
            "confusion": {"tp": self.tp, "fp": self.fp, "fn": self.fn,
                          "tn": self.tn},
            "positive": {"precision": pp, "recall": pr, "f1": pf},
            "negative": {"precision": np_, "recall": nr, "f1": nf},
        }


@dataclass
class CvCell:
    C: float
    ratio: float
    fold: int
    precision: float
    recall: float
    f1: float


def _labels_to_signs(labels: Sequence[bool]) -> np.ndarray:
    return np.where(np.asarray(labels, dtype=bool), 1.0, -1.0)


def train_linear_svm(
    examples: Sequence[tuple[SparseVector, bool]],
    config: TrainConfig,
    vocab: Optional[FeatureVocab] = None,
) -> LinearModel:
    """Minimize 0.5*||w||^2 + C * sum_i cw_i * hinge(y_i * (w.x_i + b)) by
    full-batch subgradient descent with backtracking line search. The line
    search only accepts strict decreases, so the recorded objective history
    is monotone non-increasing."""
    if not examples:
        raise DataError("no training examples")
    labels = [lab for _, lab in examples]
    if all(labels) or not any(labels):
        raise DataError("training data must contain both classes")
    if vocab is None:
        n_features = 1 + max(
            (int(v.indices.max()) for v, _ in examples if v.nnz), default=0
        )
    else:
        n_features = len(vocab)
    vectors = [v for v, _ in examples]
    indptr, indices, data = to_csr(vectors, n_features)
    y = _labels_to_signs(labels)
    cw = np.where(y > 0, config.class_weight_ratio, 1.0)

    w = np.zeros(n_features, dtype=np.float64)
    b = 0.0
    obj, gw, gb = _svm_kernels.obj_grad(
        indptr, indices, data, y, cw, w, b, config.C
    )
    history = [obj]
    step = 1.0 / (config.C * len(examples))
    for _ in range(config.max_epochs):
        accepted = False
        for _ in range(60):
            w_new = w - step * gw
            b_new = b - step * gb
            obj_new, gw_new, gb_new = _svm_kernels.obj_grad(
                indptr, indices, data, y, cw, w_new, b_new, config.C
            )
            if obj_new < obj:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        decrease = obj - obj_new
        w, b, obj, gw, gb = w_new, b_new, obj_new, gw_new, gb_new
        history.append(obj)
        step *= 2.0
        if decrease < config.tolerance * max(1.0, abs(obj)):
            break
    return LinearModel(
        weights=w, bias=b, vocab=vocab, train_config=config,
        objective_history=history,
    )


def decision_score(model: LinearModel, x: SparseVector) -> ConfidenceScore:
    norm = model.weight_norm
    if norm == 0:
        raise DataError("degenerate model: zero weight vector")
    raw = float(model.weights[x.indices] @ x.values) + model.bias
    return ConfidenceScore(raw / norm)


def decision_scores(
    model: LinearModel, vectors: Sequence[SparseVector]
) -> np.ndarray:
    norm = model.weight_norm
    if norm == 0:
        raise DataError("degenerate model: zero weight vector")
    indptr, indices, data = to_csr(vectors, len(model.weights))
    raw = _svm_kernels.decision_values(
        indptr, indices, data, model.weights, model.bias
    )
    return raw / norm


def evaluate(
    model: LinearModel, heldout: Sequence[tuple[SparseVector, bool]]
) -> EvalReport:
    if not heldout:
        raise DataError("held-out set is empty")
    scores = decision_scores(model, [v for v, _ in heldout])
    tp = fp = fn = tn = 0
    for score, (_, label) in zip(scores, heldout):
        pred = score >= 0
        if pred and label:
            tp += 1
        elif pred and not label:
            fp += 1
        elif not pred and label:
            fn += 1
        else:
            tn += 1
    return EvalReport(tp, fp, fn, tn)


def _stratified_folds(
    labels: Sequence[bool], k: int, seed: int
) -> list[list[int]]:
    rng = random.Random(seed)
    pos = [i for i, lab in enumerate(labels) if lab]
    neg = [i for i, lab in enumerate(labels) if not lab]
    rng.shuffle(pos)
    rng.shuffle(neg)
    folds: list[list[int]] = [[] for _ in range(k)]
    for j, i in enumerate(pos + neg):
        folds[j % k].append(i)
    return folds


def grid_search_cv(
    examples: Sequence[tuple[SparseVector, bool]],
    C_grid: Sequence[float] = DEFAULT_C_GRID,
    ratio_grid: Sequence[float] = DEFAULT_RATIO_GRID,
    k: int = 10,
    seed: int = 0,
    vocab: Optional[FeatureVocab] = None,
    max_epochs: int = 300,
    tolerance: float = 1e-8,
) -> tuple[TrainConfig, LinearModel, list[CvCell]]:
    """Stratified k-fold grid search maximizing mean positive-class F1.
    Ties break toward smaller C, then ratio closest to 1, then smaller
    ratio. The winning config is retrained on all examples."""
    if len(examples) < k:
        raise DataError(f"need at least k={k} examples")
    if not C_grid or not ratio_grid:
        raise DataError("both grids must be non-empty")
    labels = [lab for _, lab in examples]
    folds = _stratified_folds(labels, k, seed)
    table: list[CvCell] = []
    means: dict[tuple[float, float], float] = {}
    for C in C_grid:
        for ratio in ratio_grid:
            config = TrainConfig(C=C, class_weight_ratio=ratio,
                                 max_epochs=max_epochs, tolerance=tolerance,
                                 seed=seed)
            f1s = []
            for fold_idx, fold in enumerate(folds):
                fold_set = set(fold)
                train = [ex for i, ex in enumerate(examples)
                         if i not in fold_set]
                test = [examples[i] for i in fold]
                train_labels = [lab for _, lab in train]
                if all(train_labels) or not any(train_labels) or not test:
                    warnings.warn(
                        f"fold {fold_idx} has a single class; F1 counted as 0"
                    )
                    table.append(CvCell(C, ratio, fold_idx, 0.0, 0.0, 0.0))
                    f1s.append(0.0)
                    continue
                model = train_linear_svm(train, config, vocab=vocab)
                report = evaluate(model, test)
                p, r, f1 = report.positive
                table.append(CvCell(C, ratio, fold_idx, p, r, f1))
                f1s.append(f1)
            means[(C, ratio)] = sum(f1s) / len(f1s)

    best_C, best_ratio = min(
        means,
        key=lambda key: (
            -means[key], key[0], abs(math.log(key[1])), key[1]
        ),
    )
    best = TrainConfig(C=best_C, class_weight_ratio=best_ratio,
                       max_epochs=max_epochs, tolerance=tolerance, seed=seed)
    final = train_linear_svm(examples, best, vocab=vocab)
    return best, final, table


def write_cv_table(table: Iterable[CvCell], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("C,ratio,fold,precision,recall,f1\n")
        for cell in table:
            fh.write(
                f"{cell.C},{cell.ratio},{cell.fold},"
                f"{cell.precision},{cell.recall},{cell.f1}\n"
            )


def nearest_rank_percentile(values: Sequence[float], percentile: float) -> float:
    """Value at position ceil(p/100 * n) of the sorted sample (1-based)."""
    if not len(values):
        raise DataError("empty sample")
    ordered = sorted(values)
    rank = max(1, math.ceil(percentile / 100.0 * len(ordered)))
    return ordered[rank - 1]


def select_round2_samples(
    scored: Sequence[tuple[str, float]],
    type1_count: int,
    type2_count: int,
    percentile: float = 80.0,
    seed: int = 0,
) -> tuple[list[str], list[str]]:
    """Type-1: random high-confidence positives at or above the nearest-rank
    percentile cutoff. Type-2: smallest-|score| tweets across both classes,
    excluding Type-1 picks."""
    if not scored:
        raise DataError("no scored tweets")
    rng = random.Random(seed)
    positives = [(tid, s) for tid, s in scored if s >= 0]
    type1: list[str] = []
    if type1_count > 0 and positives:
        cutoff = nearest_rank_percentile([s for _, s in positives], percentile)
        eligible = [tid for tid, s in positives if s >= cutoff]
        if type1_count > len(eligible):
            warnings.warn(
                f"type1_count {type1_count} exceeds eligible pool "
                f"{len(eligible)}; returning the whole pool"
            )
            type1 = list(eligible)
        else:
            type1 = rng.sample(eligible, type1_count)
    taken = set(type1)
    remaining = [(tid, s) for tid, s in scored if tid not in taken]
    remaining.sort(key=lambda ts: (abs(ts[1]), ts[0]))
    if type2_count > len(remaining):
        warnings.warn(
            f"type2_count {type2_count} exceeds pool {len(remaining)}"
        )
    type2 = [tid for tid, _ in remaining[:type2_count]]
    return type1, type2


def top_features(
    model: LinearModel, k: int = 15
) -> tuple[list[tuple[str, float]], list[tuple[str, float]]]:
    """k most positive and k most negative features by weight."""
    if model.vocab is None:
        raise DataError("model has no vocabulary attached")
    by_index = {idx: gram for gram, idx in model.vocab.items()}
    order = np.argsort(model.weights)
    neg = [
        (by_index[int(i)], float(model.weights[i]))
        for i in order[:k]
        if model.weights[i] < 0
    ]
    pos = [
        (by_index[int(i)], float(model.weights[i]))
        for i in order[::-1][:k]
        if model.weights[i] > 0
    ]
    return pos, neg


def save_model(model: LinearModel, path) -> None:
    """Versioned flat file: text header + vocab, then little-endian float64
    weights and bias."""
    if model.vocab is None:
        raise DataError("cannot serialize a model without a vocabulary")
    with open(path, "wb") as fh:
        header = (
            f"{MODEL_MAGIC} v{MODEL_VERSION}\n"
            f"vocab_size {len(model.vocab)}\n"
            f"C {model.train_config.C!r}\n"
            f"ratio {model.train_config.class_weight_ratio!r}\n"
            f"seed {model.train_config.seed}\n"
        )
        fh.write(header.encode("utf-8"))
        for gram, idx in sorted(model.vocab.items(), key=lambda kv: kv[1]):
            fh.write(f"{gram}\t{idx}\n".encode("utf-8"))
        fh.write(b"WEIGHTS\n")
        fh.write(model.weights.astype("<f8").tobytes())
        fh.write(struct.pack("<d", model.bias))


def load_model(path) -> LinearModel:
    blob = Path(path).read_bytes()
    try:
        sep = blob.index(b"WEIGHTS\n")
        text = blob[:sep].decode("utf-8").splitlines()
        magic = text[0].split()
        if magic[0] != MODEL_MAGIC or magic[1] != f"v{MODEL_VERSION}":
            raise DataError(f"unrecognized model file header: {text[0]!r}")
        meta = dict(line.split(" ", 1) for line in text[1:5])
        vocab_size = int(meta["vocab_size"])
        items = []
        for line in text[5 : 5 + vocab_size]:
            gram, idx = line.rsplit("\t", 1)
            items.append((gram, int(idx)))
        vocab = FeatureVocab.from_items(items)
        payload = blob[sep + len(b"WEIGHTS\n") :]
        weights = np.frombuffer(
            payload[: vocab_size * 8], dtype="<f8"
        ).astype(np.float64)
        (bias,) = struct.unpack(
            "<d", payload[vocab_size * 8 : vocab_size * 8 + 8]
        )
        config = TrainConfig(
            C=float(meta["C"]),
            class_weight_ratio=float(meta["ratio"]),
            seed=int(meta["seed"]),
        )
    except (ValueError, KeyError, IndexError, struct.error,
            UnicodeDecodeError) as exc:
        raise DataError(f"malformed model file {path}: {exc}") from exc
    return LinearModel(weights=weights, bias=bias, vocab=vocab,
                       train_config=config)
