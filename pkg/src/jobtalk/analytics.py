"""Timezone-aware volume/affect series, account separation, lexical
statistics, rank correlation, and POS-profile comparison."""

from __future__ import annotations

import csv
import math
import re
from collections import Counter, defaultdict
from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone
from typing import Iterable, Optional, Sequence
from zoneinfo import ZoneInfo, ZoneInfoNotFoundError

import numpy as np

from .corpus import DataError, Tweet, URL_PLACEHOLDER, normalize_text, tokenize
from .lexicon import Lexicon, score_category

WEEKDAY_NAMES = ("Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun")

# Penn Treebank word-level tagset (36 tags)
PENN_TAGS = frozenset(
    "CC CD DT EX FW IN JJ JJR JJS LS MD NN NNS NNP NNPS PDT POS PRP PRP$ "
    "RB RBR RBS RP SYM TO UH VB VBD VBG VBN VBP VBZ WDT WP WP$ WRB".split()
)


@dataclass(frozen=True)
class LocalTimestamp:
    local_date: date
    weekday: int  # 0 = Monday
    hour: int
    zone: str
    is_dst: bool
    utc_offset_seconds: int

    @property
    def weekday_name(self) -> str:
        return WEEKDAY_NAMES[self.weekday]


@dataclass
class TimeBucket:
    key: object  # "YYYY-MM" | weekday int | hour int | (weekday, hour)
    total: int
    denominator: int = 1

    @property
    def value(self) -> float:
        return self.total / self.denominator if self.denominator else 0.0


@dataclass
class AffectCell:
    weekday: int
    hour: int
    mean_pa: float
    mean_na: float
    ci95_pa: Optional[float]  # half-width; None when n < 2
    ci95_na: Optional[float]
    n: int


@dataclass
class LexicalStats:
    tweet_count: int
    account_count: int
    token_count: int
    avg_tokens_per_tweet: float
    unique_token_count: int
    avg_unique_tokens_per_tweet: float
    unique_to_total_ratio: float
    hapax_count: int
    avg_hapax_per_tweet: float


@dataclass
class RankCorrelation:
    tau: float
    n: int
    concordant: int
    discordant: int
    ties_first: int  # pairs tied only in the first ranking
    ties_second: int
    ties_both: int


@dataclass(frozen=True)
class AccountParams:
    ad_hashtags: frozenset[str] = frozenset(
        {"#job", "#jobs", "#hiring", "#tweetmyjobs", "#veteranjob",
         "#hospitality"}
    )
    ad_fraction_threshold: float = 0.5
    min_signals: int = 2
    title_colon_window: int = 6


def to_local(ts_utc: datetime, zone: str) -> LocalTimestamp:
    """Convert a UTC instant to civil time under IANA rules (DST-aware)."""
    try:
        tz = ZoneInfo(zone)
    except (ZoneInfoNotFoundError, ValueError) as exc:
        raise DataError(f"unknown timezone: {zone!r}") from exc
    if ts_utc.tzinfo is None:
        ts_utc = ts_utc.replace(tzinfo=timezone.utc)
    local = ts_utc.astimezone(tz)
    return LocalTimestamp(
        local_date=local.date(),
        weekday=local.weekday(),
        hour=local.hour,
        zone=zone,
        is_dst=bool(local.dst()),
        utc_offset_seconds=int(local.utcoffset().total_seconds()),
    )


def _month_span(first: date, last: date) -> list[str]:
    months = []
    y, m = first.year, first.month
    while (y, m) <= (last.year, last.month):
        months.append(f"{y:04d}-{m:02d}")
        m += 1
        if m > 12:
            y, m = y + 1, 1
    return months


def _weekday_occurrences(first: date, last: date) -> list[int]:
    """Distinct calendar dates per weekday in the inclusive range."""
    counts = [0] * 7
    total_days = (last - first).days + 1
    for offset in range(total_days):
        counts[(first + timedelta(days=offset)).weekday()] += 1
    return counts


def volume_series(
    tweets: Iterable[Tweet], granularity: str, zone: str = "UTC"
) -> list[TimeBucket]:
    """month: raw counts; weekday/hour: totals divided by the number of
    distinct such calendar days in the corpus's local date range."""
    if granularity not in ("month", "weekday", "hour"):
        raise DataError(f"unknown granularity: {granularity!r}")
    locals_ = [to_local(t.created_at_utc, zone) for t in tweets]
    if not locals_:
        return []
    dates = [lt.local_date for lt in locals_]
    first, last = min(dates), max(dates)
    if granularity == "month":
        counts = Counter(
            f"{lt.local_date.year:04d}-{lt.local_date.month:02d}"
            for lt in locals_
        )
        return [TimeBucket(m, counts.get(m, 0), 1)
                for m in _month_span(first, last)]
    if granularity == "weekday":
        counts = Counter(lt.weekday for lt in locals_)
        denoms = _weekday_occurrences(first, last)
        return [
            TimeBucket(wd, counts.get(wd, 0), max(denoms[wd], 1))
            for wd in range(7)
        ]
    counts = Counter(lt.hour for lt in locals_)
    n_days = (last - first).days + 1
    return [TimeBucket(h, counts.get(h, 0), n_days) for h in range(24)]


def _mean_ci(values: Sequence[float]) -> tuple[float, Optional[float]]:
    n = len(values)
    if n == 0:
        return 0.0, None
    mean = sum(values) / n
    if n < 2:
        return mean, None
    sd = math.sqrt(sum((v - mean) ** 2 for v in values) / (n - 1))
    return mean, 1.96 * sd / math.sqrt(n)


def affect_matrix(
    tweets: Iterable[Tweet], lexicon: Lexicon, zone: str = "UTC",
    pa_category: str = "PA", na_category: str = "NA",
) -> list[AffectCell]:
    """Mean tweet-level PA/NA ratios with normal-approximation 95% CIs per
    (weekday, hour) cell; 7x24 cells in row-major order."""
    for cat in (pa_category, na_category):
        if cat not in lexicon.categories:
            raise DataError(f"lexicon lacks required category {cat!r}")
    cells: dict[tuple[int, int], list[tuple[float, float]]] = defaultdict(list)
    for t in tweets:
        lt = to_local(t.created_at_utc, zone)
        tokens = tokenize(t.text)
        pa = score_category(tokens, lexicon, pa_category).ratio
        na = score_category(tokens, lexicon, na_category).ratio
        cells[(lt.weekday, lt.hour)].append((pa, na))
    grid = []
    for wd in range(7):
        for hour in range(24):
            ratios = cells.get((wd, hour), [])
            mean_pa, ci_pa = _mean_ci([r[0] for r in ratios])
            mean_na, ci_na = _mean_ci([r[1] for r in ratios])
            grid.append(
                AffectCell(wd, hour, mean_pa, mean_na, ci_pa, ci_na,
                           len(ratios))
            )
    return grid


_PAREN_RE = re.compile(r"\([^)]*\)")


def is_ad_like(tweet: Tweet, params: AccountParams = AccountParams()) -> bool:
    """Ad-like iff at least min_signals of: job-ad hashtag, URL, and a
    'Name: Role ... (Location)' title pattern."""
    norm_tokens = tokenize(normalize_text(tweet.text))
    signals = 0
    if any(tok in params.ad_hashtags for tok in norm_tokens):
        signals += 1
    if URL_PLACEHOLDER in norm_tokens:
        signals += 1
    raw_tokens = tweet.text.split()
    colon_early = any(
        ":" in tok for tok in raw_tokens[: params.title_colon_window]
    )
    if colon_early and _PAREN_RE.search(tweet.text):
        signals += 1
    return signals >= params.min_signals


def classify_account(
    account_tweets: Sequence[Tweet], params: AccountParams = AccountParams()
) -> str:
    """'commercial' iff the account's ad-like tweet fraction reaches the
    threshold, else 'individual'."""
    if not account_tweets:
        raise DataError("classify_account needs at least one tweet")
    ad_like = sum(1 for t in account_tweets if is_ad_like(t, params))
    fraction = ad_like / len(account_tweets)
    return (
        "commercial"
        if fraction >= params.ad_fraction_threshold
        else "individual"
    )


def lexical_stats(tweets: Sequence[Tweet]) -> LexicalStats:
    if not tweets:
        return LexicalStats(0, 0, 0, 0.0, 0, 0.0, 0.0, 0, 0.0)
    counts: Counter = Counter()
    token_total = 0
    accounts = set()
    for t in tweets:
        tokens = tokenize(t.text)
        counts.update(tokens)
        token_total += len(tokens)
        accounts.add(t.account_id)
    unique = len(counts)
    hapax = sum(1 for c in counts.values() if c == 1)
    n = len(tweets)
    return LexicalStats(
        tweet_count=n,
        account_count=len(accounts),
        token_count=token_total,
        avg_tokens_per_tweet=token_total / n,
        unique_token_count=unique,
        avg_unique_tokens_per_tweet=unique / n,
        unique_to_total_ratio=unique / token_total if token_total else 0.0,
        hapax_count=hapax,
        avg_hapax_per_tweet=hapax / n,
    )


def kendall_tau(
    r1: dict[str, float], r2: dict[str, float]
) -> RankCorrelation:
    """Tie-corrected Kendall tau-b over all id pairs (exact pair counting)."""
    if set(r1) != set(r2):
        raise DataError("rankings must cover the same id set")
    ids = sorted(r1)
    x = np.array([r1[i] for i in ids], dtype=np.float64)
    y = np.array([r2[i] for i in ids], dtype=np.float64)
    n = len(ids)
    if n < 2:
        raise DataError("need at least 2 items")
    sx = np.sign(x[:, None] - x[None, :])
    sy = np.sign(y[:, None] - y[None, :])
    upper = np.triu_indices(n, k=1)
    sx = sx[upper]
    sy = sy[upper]
    concordant = int(np.sum((sx * sy) > 0))
    discordant = int(np.sum((sx * sy) < 0))
    ties_both = int(np.sum((sx == 0) & (sy == 0)))
    ties_first = int(np.sum((sx == 0) & (sy != 0)))
    ties_second = int(np.sum((sx != 0) & (sy == 0)))
    n0 = n * (n - 1) // 2
    denom_x = n0 - ties_first - ties_both
    denom_y = n0 - ties_second - ties_both
    if denom_x == 0 or denom_y == 0:
        raise DataError("tau-b undefined: a ranking is entirely tied")
    tau = (concordant - discordant) / math.sqrt(denom_x * denom_y)
    return RankCorrelation(tau, n, concordant, discordant, ties_first,
                           ties_second, ties_both)


def pos_profile(
    tagged_tweets: Sequence[Sequence[tuple[str, str]]],
    tagset: frozenset[str] = PENN_TAGS,
) -> dict[str, float]:
    """Per-tweet tag frequencies normalized to sum 1, then averaged."""
    sums: dict[str, float] = {tag: 0.0 for tag in sorted(tagset)}
    n = 0
    for tagged in tagged_tweets:
        if not tagged:
            continue
        counts: Counter = Counter()
        for _, tag in tagged:
            if tag not in tagset:
                raise DataError(f"unknown POS tag: {tag!r}")
            counts[tag] += 1
        total = sum(counts.values())
        for tag, c in counts.items():
            sums[tag] += c / total
        n += 1
    if n == 0:
        return sums
    return {tag: s / n for tag, s in sums.items()}


def compare_pos_profiles(
    profile_a: dict[str, float], profile_b: dict[str, float]
) -> dict[str, float]:
    """Per-tag difference (a minus b)."""
    tags = sorted(set(profile_a) | set(profile_b))
    return {
        tag: profile_a.get(tag, 0.0) - profile_b.get(tag, 0.0) for tag in tags
    }


def write_series_csv(buckets: Iterable[TimeBucket], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bucket_key", "value"])
        for b in buckets:
            writer.writerow([b.key, b.value])


def write_affect_csv(grid: Iterable[AffectCell], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["weekday", "hour", "mean_pa", "ci_pa", "mean_na", "ci_na", "n"]
        )
        for c in grid:
            writer.writerow(
                [c.weekday, c.hour, c.mean_pa,
                 "" if c.ci95_pa is None else c.ci95_pa,
                 c.mean_na,
                 "" if c.ci95_na is None else c.ci95_na,
                 c.n]
            )
