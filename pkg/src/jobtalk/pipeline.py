"""Round orchestration: filter, annotate (simulated), aggregate, adjudicate,
train, classify, sample; plus report export and the simulated annotator."""

from __future__ import annotations

import hashlib
import json
import random
import shutil
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Sequence

from . import annotation, model as model_mod
from .annotation import (
    Batch,
    GoldLabel,
    LabelRecord,
    aggregate_labels,
    build_gold_set,
    make_batches,
    needs_adjudication,
    tier_histogram,
    write_labels_csv,
)
from .corpus import (
    Corpus,
    DataError,
    FilterRules,
    Tweet,
    job_likely_filter,
    normalize_corpus,
    normalize_text,
    tokenize,
)
from .features import NgramConfig, build_vocab, vectorize
from .model import (
    EvalReport,
    LinearModel,
    decision_scores,
    evaluate,
    grid_search_cv,
    save_model,
    select_round2_samples,
    write_cv_table,
)


@dataclass(frozen=True)
class SimulatedAnnotator:
    """Stands in for crowdworkers: answers with the oracle label, flipped
    independently with flip_probability (also at duplicate positions)."""

    truth: dict[str, bool]
    flip_probability: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if not 0 <= self.flip_probability < 0.5:
            raise DataError("flip_probability must be in [0, 0.5)")

    def answer(self, batch_id: str, worker_id: str, position: int,
               tweet_id: str) -> str:
        if tweet_id not in self.truth:
            raise DataError(f"oracle does not cover tweet {tweet_id!r}")
        rng = random.Random(
            f"{self.seed}:{batch_id}:{worker_id}:{position}:{tweet_id}"
        )
        label = self.truth[tweet_id]
        if rng.random() < self.flip_probability:
            label = not label
        return "Y" if label else "N"


def simulate_annotations(
    batches: Sequence[Batch],
    annotator: SimulatedAnnotator,
    n_workers: int = 5,
) -> list[LabelRecord]:
    """Every simulated worker answers every position of every batch."""
    submitted_at = datetime(2014, 1, 1, tzinfo=timezone.utc)
    records = []
    for batch in batches:
        for w in range(n_workers):
            worker_id = f"sim-w{w}"
            for pos, tweet_id in enumerate(batch.item_list):
                records.append(
                    LabelRecord(
                        batch_id=batch.id,
                        worker_id=worker_id,
                        position=pos,
                        tweet_id=tweet_id,
                        answer=annotator.answer(
                            batch.id, worker_id, pos, tweet_id
                        ),
                        submitted_at=submitted_at,
                    )
                )
    return records


@dataclass
class RoundRecipe:
    round_index: int
    annotator: SimulatedAnnotator
    heldout: list[tuple[Tweet, bool]]
    seed: int = 0
    rules: FilterRules = field(default_factory=FilterRules.default)
    ngram: NgramConfig = field(default_factory=NgramConfig)
    base_size: int = 40
    dup_count: int = 5
    n_workers: int = 5
    annotation_budget: int = 2000
    random_negatives: bool = True
    random_negative_fraction: float = 0.37  # mirrors 757 of ~2,054 round-1 adds
    type1_count: int = 300
    type2_count: int = 300
    percentile: float = 80.0
    C_grid: Sequence[float] = model_mod.DEFAULT_C_GRID
    ratio_grid: Sequence[float] = model_mod.DEFAULT_RATIO_GRID
    cv_folds: int = 10
    max_epochs: int = 200
    tolerance: float = 1e-7

    def stage_seed(self, stage: str) -> int:
        digest = hashlib.sha256(f"{self.seed}:{stage}".encode()).digest()
        return int.from_bytes(digest[:8], "little")


@dataclass
class RoundArtifacts:
    round_dir: Path
    gold: list[GoldLabel]
    model: LinearModel
    eval_report: EvalReport
    type1: list[str]
    type2: list[str]
    cutoff: Optional[float]
    manifest: dict
    scores: dict[str, float]


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _tokens(text: str) -> list[str]:
    return tokenize(normalize_text(text))


def _write_gold_csv(gold: Sequence[GoldLabel], path: Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("tweet_id,label,source\n")
        for g in sorted(gold, key=lambda g: g.tweet_id):
            fh.write(f"{g.tweet_id},{'Y' if g.label else 'N'},{g.source}\n")


def write_tier_histogram_csv(hist: dict[str, int], path: Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("tier,count\n")
        for tier in annotation.TIERS:
            fh.write(f"{tier},{hist[tier]}\n")


def run_round(
    recipe: RoundRecipe,
    corpus: Corpus,
    out_dir,
    previous: Optional[RoundArtifacts] = None,
) -> RoundArtifacts:
    """Execute one annotate/train/sample round and persist its artifacts
    with a hash manifest. Round >= 2 requires the previous round (its
    confidence scores drive Type-1/Type-2 sampling)."""
    if recipe.round_index >= 2 and previous is None:
        raise DataError("round >= 2 needs the previous round's artifacts")
    round_dir = Path(out_dir) / f"round{recipe.round_index}"
    round_dir.mkdir(parents=True, exist_ok=True)

    normalized = normalize_corpus(corpus)
    job_likely = job_likely_filter(normalized, recipe.rules)
    job_likely_ids = [t.id for t in job_likely]
    by_id = {t.id: t for t in normalized}

    # choose the annotation pool
    rng = random.Random(recipe.stage_seed("pool"))
    if recipe.round_index == 1:
        pool = job_likely_ids
        if len(pool) > recipe.annotation_budget:
            pool = sorted(rng.sample(pool, recipe.annotation_budget))
    else:
        already = {g.tweet_id for g in previous.gold}
        eligible = [
            (tid, previous.scores[tid])
            for tid in job_likely_ids
            if tid not in already and tid in previous.scores
        ]
        type1, type2 = select_round2_samples(
            eligible,
            recipe.type1_count,
            recipe.type2_count,
            recipe.percentile,
            seed=recipe.stage_seed("sample-pool"),
        )
        pool = sorted(set(type1) | set(type2))

    batches = make_batches(
        pool, recipe.base_size, recipe.dup_count,
        seed=recipe.stage_seed("batch"),
    )
    labels = simulate_annotations(batches, recipe.annotator,
                                  recipe.n_workers)
    write_labels_csv(labels, round_dir / "labels.csv")

    aggregates, _ = aggregate_labels(labels)
    adjudications = {
        agg.tweet_id: recipe.annotator.truth[agg.tweet_id]
        for agg in aggregates
        if needs_adjudication(agg)
    }
    gold = build_gold_set(aggregates, adjudications)
    hist = tier_histogram(aggregates)
    write_tier_histogram_csv(hist, round_dir / "tier_histogram.csv")

    if previous is not None:
        carried = {g.tweet_id for g in gold}
        gold = gold + [
            g for g in previous.gold if g.tweet_id not in carried
        ]

    # round-1 negative augmentation: random tweets outside Job-Likely are
    # assumed negative (deliberate label noise). They join the persisted
    # gold set so later rounds keep training on them.
    if recipe.round_index == 1 and recipe.random_negatives:
        labeled = {g.tweet_id for g in gold}
        outside = [
            t.id for t in normalized
            if t.id not in set(job_likely_ids) and t.id not in labeled
        ]
        want = int(len(gold) * recipe.random_negative_fraction)
        neg_rng = random.Random(recipe.stage_seed("random-negatives"))
        gold = gold + [
            GoldLabel(tid, False, "assumed-negative")
            for tid in neg_rng.sample(outside, min(want, len(outside)))
        ]
    training_ids = {g.tweet_id: g.label for g in gold}

    _write_gold_csv(gold, round_dir / "gold.csv")

    examples_tokens = [
        (_tokens(by_id[tid].text), label)
        for tid, label in sorted(training_ids.items())
    ]
    vocab = build_vocab((toks for toks, _ in examples_tokens), recipe.ngram)
    examples = [
        (vectorize(toks, vocab, recipe.ngram), label)
        for toks, label in examples_tokens
    ]
    best, trained, cv_table = grid_search_cv(
        examples,
        recipe.C_grid,
        recipe.ratio_grid,
        k=recipe.cv_folds,
        seed=recipe.stage_seed("cv"),
        vocab=vocab,
        max_epochs=recipe.max_epochs,
        tolerance=recipe.tolerance,
    )
    save_model(trained, round_dir / "model.bin")
    write_cv_table(cv_table, round_dir / "cv_table.csv")

    # classify the Job-Likely set with the new model
    vectors = [
        vectorize(_tokens(by_id[tid].text), vocab, recipe.ngram)
        for tid in job_likely_ids
    ]
    raw = decision_scores(trained, vectors) if vectors else []
    scores = {tid: float(s) for tid, s in zip(job_likely_ids, raw)}
    with open(round_dir / "classified.csv", "w", encoding="utf-8") as fh:
        fh.write("tweet_id,score,label\n")
        for tid in job_likely_ids:
            s = scores[tid]
            fh.write(f"{tid},{s!r},{'Y' if s >= 0 else 'N'}\n")

    heldout_examples = [
        (vectorize(_tokens(t.text), vocab, recipe.ngram), label)
        for t, label in recipe.heldout
    ]
    report = evaluate(trained, heldout_examples)
    (round_dir / "eval.json").write_text(
        json.dumps(report.as_dict(), indent=2, sort_keys=True),
        encoding="utf-8",
    )

    # select the next annotation round's samples
    unlabeled = [
        (tid, scores[tid]) for tid in job_likely_ids
        if tid not in training_ids
    ]
    cutoff = None
    type1: list[str] = []
    type2: list[str] = []
    if unlabeled:
        positives = [s for _, s in unlabeled if s >= 0]
        if positives:
            cutoff = model_mod.nearest_rank_percentile(
                positives, recipe.percentile
            )
        type1, type2 = select_round2_samples(
            unlabeled, recipe.type1_count, recipe.type2_count,
            recipe.percentile, seed=recipe.stage_seed("sample"),
        )
    samples = {
        "cutoff": cutoff,
        "type1": [[tid, scores[tid]] for tid in sorted(type1)],
        "type2": [[tid, scores[tid]] for tid in sorted(type2)],
    }
    (round_dir / "samples.json").write_text(
        json.dumps(samples, indent=2, sort_keys=True), encoding="utf-8"
    )

    pos_p, pos_r, pos_f1 = report.positive
    artifact_names = [
        "labels.csv", "tier_histogram.csv", "gold.csv", "model.bin",
        "cv_table.csv", "classified.csv", "eval.json", "samples.json",
    ]
    manifest = {
        "round": recipe.round_index,
        "seed": recipe.seed,
        "config": {
            "C": best.C,
            "ratio": best.class_weight_ratio,
            "base_size": recipe.base_size,
            "dup_count": recipe.dup_count,
            "n_workers": recipe.n_workers,
            "flip_probability": recipe.annotator.flip_probability,
        },
        "metrics": {
            "gold_size": len(gold),
            "training_size": len(examples),
            "heldout_precision": pos_p,
            "heldout_recall": pos_r,
            "heldout_f1": pos_f1,
            "sampling_cutoff": cutoff,
        },
        "artifacts": {
            name: _sha256(round_dir / name) for name in artifact_names
        },
    }
    (round_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True), encoding="utf-8"
    )
    return RoundArtifacts(
        round_dir=round_dir,
        gold=gold,
        model=trained,
        eval_report=report,
        type1=type1,
        type2=type2,
        cutoff=cutoff,
        manifest=manifest,
        scores=scores,
    )


EXPORT_FILES = (
    "cv_table.csv", "eval.json", "tier_histogram.csv",
    "volume_month.csv", "volume_weekday.csv", "volume_hour.csv",
)


def export_reports(round_dir, out_dir, corpus: Corpus,
                   zone: str = "UTC") -> list[Path]:
    """Bundle a round's CV table, eval report, tier histogram, and volume
    series CSVs into one directory."""
    from .analytics import volume_series, write_series_csv

    round_dir = Path(round_dir)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name in ("cv_table.csv", "eval.json", "tier_histogram.csv"):
        src = round_dir / name
        if not src.exists():
            raise DataError(f"missing round artifact: {name}")
        shutil.copyfile(src, out_dir / name)
    for granularity in ("month", "weekday", "hour"):
        write_series_csv(
            volume_series(corpus, granularity, zone),
            out_dir / f"volume_{granularity}.csv",
        )
    return [out_dir / name for name in EXPORT_FILES]
