"""Annotation batches, agreement statistics, vote aggregation, gold labels."""

from __future__ import annotations

import csv
import random
from collections import Counter, defaultdict
from dataclasses import dataclass
from datetime import datetime
from typing import Iterable, Optional, Sequence

from .corpus import DataError

RATERS_PER_TWEET = 5
CONSISTENCY_THRESHOLD = 0.8

TIERS = ("unanimous-Y", "4/5-Y", "3/5-Y", "3/5-N", "4/5-N", "unanimous-N")


@dataclass
class Batch:
    id: str
    item_list: list[str]
    dup_pairs: list[tuple[int, int]]

    @property
    def unique_ids(self) -> list[str]:
        dup_positions = {b for _, b in self.dup_pairs}
        return [
            tid
            for pos, tid in enumerate(self.item_list)
            if pos not in dup_positions
        ]


@dataclass(frozen=True)
class LabelRecord:
    batch_id: str
    worker_id: str
    position: int
    tweet_id: str
    answer: str
    submitted_at: datetime

    def __post_init__(self):
        if self.answer not in ("Y", "N"):
            raise DataError(f"answer must be Y or N, got {self.answer!r}")


@dataclass
class AggregatedLabel:
    tweet_id: str
    yes_count: int
    no_count: int
    tier: str


@dataclass
class AgreementReport:
    fleiss_kappa: Optional[float]
    krippendorff_alpha: Optional[float]
    per_worker_consistency: dict[str, float]


@dataclass
class GoldLabel:
    tweet_id: str
    label: bool  # True = job-related
    source: str  # "unanimous-crowd" | "community"


def make_batches(
    tweet_ids: Sequence[str],
    base_size: int = 40,
    dup_count: int = 5,
    seed: int = 0,
) -> list[Batch]:
    """Split tweet ids into batches of base_size plus dup_count duplicate
    probes at shuffled positions. The remainder forms a final short batch."""
    if dup_count > base_size:
        raise DataError("dup_count must not exceed base_size")
    rng = random.Random(seed)
    batches = []
    for start in range(0, len(tweet_ids), base_size):
        chunk = list(tweet_ids[start : start + base_size])
        n_dup = min(dup_count, len(chunk))
        dups = rng.sample(chunk, n_dup)
        items = chunk + dups
        rng.shuffle(items)
        # record (first, second) positions of each duplicated id
        positions = defaultdict(list)
        for pos, tid in enumerate(items):
            positions[tid].append(pos)
        dup_pairs = sorted(
            (p[0], p[1]) for tid, p in positions.items() if len(p) == 2
        )
        batches.append(
            Batch(id=f"b{start // base_size + 1:04d}", item_list=items,
                  dup_pairs=dup_pairs)
        )
    return batches


def fleiss_kappa(votes: Sequence[Sequence[int]]) -> float:
    """Fleiss' kappa over per-item category counts; every item must carry
    the same number of ratings."""
    if len(votes) < 2:
        raise DataError("fleiss_kappa needs at least 2 items")
    n = sum(votes[0])
    if n < 2:
        raise DataError("fleiss_kappa needs at least 2 raters per item")
    for row in votes:
        if sum(row) != n:
            raise DataError("all items must have the same number of ratings")
    n_items = len(votes)
    n_cats = len(votes[0])
    p_item = [
        (sum(c * c for c in row) - n) / (n * (n - 1)) for row in votes
    ]
    p_bar = sum(p_item) / n_items
    p_cat = [
        sum(row[j] for row in votes) / (n_items * n) for j in range(n_cats)
    ]
    pe_bar = sum(p * p for p in p_cat)
    if pe_bar >= 1.0:
        return 1.0  # degenerate single-category data: perfect agreement
    return (p_bar - pe_bar) / (1 - pe_bar)


def krippendorff_alpha(grid: Sequence[Sequence[Optional[str]]]) -> float:
    """Krippendorff's alpha for nominal data via the coincidence matrix.

    `grid` is items x coders; None marks a missing cell. Items with fewer
    than two values are excluded from pairing.
    """
    coincidence: Counter = Counter()
    for row in grid:
        values = [v for v in row if v is not None]
        m = len(values)
        if m < 2:
            continue
        for i in range(m):
            for j in range(m):
                if i != j:
                    coincidence[(values[i], values[j])] += 1 / (m - 1)
    n_total = sum(coincidence.values())
    if n_total == 0:
        raise DataError("insufficient pairable data")
    marginals: Counter = Counter()
    for (c, _), w in coincidence.items():
        marginals[c] += w
    d_o = sum(w for (c1, c2), w in coincidence.items() if c1 != c2) / n_total
    d_e = sum(
        marginals[c1] * marginals[c2]
        for c1 in marginals
        for c2 in marginals
        if c1 != c2
    ) / (n_total * (n_total - 1))
    if d_e == 0:
        return 1.0  # single observed category: perfect agreement
    return 1.0 - d_o / d_e


def worker_consistency(
    labels: Iterable[LabelRecord], batch: Batch
) -> float:
    """Fraction of duplicate-probe pairs with identical answers from one
    worker; requires a complete batch."""
    records = list(labels)
    workers = {r.worker_id for r in records}
    if len(workers) != 1:
        raise DataError("worker_consistency expects one worker's records")
    by_pos = {r.position: r.answer for r in records}
    if set(by_pos) != set(range(len(batch.item_list))):
        raise DataError("incomplete batch: missing positions")
    if not batch.dup_pairs:
        return 1.0
    same = sum(1 for a, b in batch.dup_pairs if by_pos[a] == by_pos[b])
    return same / len(batch.dup_pairs)


def _tier(yes: int, no: int) -> str:
    return {
        (5, 0): "unanimous-Y",
        (4, 1): "4/5-Y",
        (3, 2): "3/5-Y",
        (2, 3): "3/5-N",
        (1, 4): "4/5-N",
        (0, 5): "unanimous-N",
    }[(yes, no)]


def dedupe_probe_answers(
    labels: Iterable[LabelRecord],
) -> list[LabelRecord]:
    """Keep only the first-position answer per (batch, worker, tweet); the
    duplicate probe's second occurrence is a quality signal, not a vote."""
    best: dict[tuple[str, str, str], LabelRecord] = {}
    for rec in labels:
        key = (rec.batch_id, rec.worker_id, rec.tweet_id)
        if key not in best or rec.position < best[key].position:
            best[key] = rec
    return sorted(
        best.values(), key=lambda r: (r.batch_id, r.position, r.worker_id)
    )


def aggregate_labels(
    labels: Iterable[LabelRecord],
) -> tuple[list[AggregatedLabel], list[str]]:
    """Per-tweet vote counts and agreement tier. Tweets without exactly
    five distinct-worker answers go to the deficiencies list instead."""
    answers: dict[str, list[str]] = defaultdict(list)
    for rec in dedupe_probe_answers(labels):
        answers[rec.tweet_id].append(rec.answer)
    aggregates = []
    deficient = []
    for tweet_id in sorted(answers):
        votes = answers[tweet_id]
        if len(votes) != RATERS_PER_TWEET:
            deficient.append(tweet_id)
            continue
        yes = votes.count("Y")
        no = votes.count("N")
        aggregates.append(
            AggregatedLabel(tweet_id, yes, no, _tier(yes, no))
        )
    return aggregates, deficient


def needs_adjudication(agg: AggregatedLabel) -> bool:
    return agg.tier in ("4/5-Y", "3/5-Y", "3/5-N", "4/5-N")


def build_gold_set(
    aggregates: Iterable[AggregatedLabel],
    adjudications: dict[str, bool],
) -> list[GoldLabel]:
    """Unanimous tweets take the crowd label; 3/5 and 4/5 tiers take the
    community label, which may overturn the crowd majority."""
    gold = []
    missing = []
    for agg in aggregates:
        if agg.tier == "unanimous-Y":
            gold.append(GoldLabel(agg.tweet_id, True, "unanimous-crowd"))
        elif agg.tier == "unanimous-N":
            gold.append(GoldLabel(agg.tweet_id, False, "unanimous-crowd"))
        elif agg.tweet_id in adjudications:
            gold.append(
                GoldLabel(agg.tweet_id, adjudications[agg.tweet_id],
                          "community")
            )
        else:
            missing.append(agg.tweet_id)
    if missing:
        raise DataError(
            "missing adjudication for tweets: " + ", ".join(missing)
        )
    return gold


def tier_histogram(aggregates: Iterable[AggregatedLabel]) -> dict[str, int]:
    hist = {t: 0 for t in TIERS}
    for agg in aggregates:
        hist[agg.tier] += 1
    return hist


def pooled_agreement(
    labels: Iterable[LabelRecord], batches: Iterable[Batch]
) -> AgreementReport:
    """Kappa/alpha pooled over all fully-rated tweets, plus per-worker
    duplicate consistency on every batch the worker completed."""
    labels = list(labels)
    batch_map = {b.id: b for b in batches}
    deduped = dedupe_probe_answers(labels)
    answers: dict[str, list[str]] = defaultdict(list)
    coders: dict[str, dict[str, str]] = defaultdict(dict)
    for rec in deduped:
        answers[rec.tweet_id].append(rec.answer)
        coders[rec.tweet_id][rec.worker_id] = rec.answer
    complete = {
        t: v for t, v in answers.items() if len(v) == RATERS_PER_TWEET
    }
    kappa = alpha = None
    if len(complete) >= 2:
        votes = [
            (v.count("Y"), v.count("N"))
            for _, v in sorted(complete.items())
        ]
        kappa = fleiss_kappa(votes)
    worker_ids = sorted({r.worker_id for r in labels})
    grid = [
        [coders[t].get(w) for w in worker_ids] for t in sorted(coders)
    ]
    try:
        alpha = krippendorff_alpha(grid)
    except DataError:
        alpha = None
    consistency: dict[str, list[float]] = defaultdict(list)
    by_batch_worker: dict[tuple[str, str], list[LabelRecord]] = defaultdict(list)
    for rec in labels:
        by_batch_worker[(rec.batch_id, rec.worker_id)].append(rec)
    for (batch_id, worker_id), recs in by_batch_worker.items():
        batch = batch_map.get(batch_id)
        if batch is None:
            continue
        try:
            consistency[worker_id].append(worker_consistency(recs, batch))
        except DataError:
            continue
    per_worker = {
        w: sum(v) / len(v) for w, v in sorted(consistency.items())
    }
    return AgreementReport(kappa, alpha, per_worker)


def per_batch_agreement(
    labels: Iterable[LabelRecord], batches: Iterable[Batch]
) -> dict[str, AgreementReport]:
    labels = list(labels)
    out = {}
    for batch in batches:
        subset = [r for r in labels if r.batch_id == batch.id]
        if subset:
            out[batch.id] = pooled_agreement(subset, [batch])
    return out


CSV_HEADER = ["batch_id", "worker_id", "position", "tweet_id", "answer",
              "submitted_at"]


def write_labels_csv(labels: Iterable[LabelRecord], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for r in labels:
            writer.writerow(
                [r.batch_id, r.worker_id, r.position, r.tweet_id, r.answer,
                 r.submitted_at.isoformat()]
            )


def read_labels_csv(path) -> list[LabelRecord]:
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER:
            raise DataError(f"unexpected label CSV header: {reader.fieldnames}")
        for row in reader:
            records.append(
                LabelRecord(
                    batch_id=row["batch_id"],
                    worker_id=row["worker_id"],
                    position=int(row["position"]),
                    tweet_id=row["tweet_id"],
                    answer=row["answer"],
                    submitted_at=datetime.fromisoformat(row["submitted_at"]),
                )
            )
    return records
