"""Ingestion, normalization, tokenization and Job-Likely rule filtering."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterator, Optional, Sequence

MENTION_PLACEHOLDER = "@SOMEONE"
URL_PLACEHOLDER = "URL"

_URL_RE = re.compile(r"(?i)^(?:https?://|www\.)\S+$")


class DataError(Exception):
    """Malformed or missing input data."""


@dataclass(frozen=True)
class Tweet:
    id: str
    account_id: str
    created_at_utc: datetime
    text: str
    latitude: Optional[float] = None
    longitude: Optional[float] = None


@dataclass
class Corpus:
    tweets: list[Tweet]
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.tweets = sorted(self.tweets, key=lambda t: t.id)
        seen = set()
        for t in self.tweets:
            if t.id in seen:
                raise DataError(f"duplicate tweet id {t.id!r}")
            seen.add(t.id)

    def __len__(self) -> int:
        return len(self.tweets)

    def __iter__(self) -> Iterator[Tweet]:
        return iter(self.tweets)


class SlangDictionary:
    """Maps informal terms (lowercase, single token) to replacement phrases."""

    def __init__(self, entries: Optional[dict[str, str]] = None):
        self.entries = {}
        for key, expansion in (entries or {}).items():
            key = key.lower()
            if re.search(r"\s", key):
                raise DataError(f"slang key contains whitespace: {key!r}")
            self.entries[key] = expansion

    @classmethod
    def from_file(cls, path) -> "SlangDictionary":
        entries = {}
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "\t" not in line:
                raise DataError(f"bad slang line (no tab): {line!r}")
            term, expansion = line.split("\t", 1)
            entries[term.strip()] = expansion.strip()
        return cls(entries)

    def get(self, token: str) -> Optional[str]:
        return self.entries.get(token)


def _parse_phrase(text: str) -> tuple[tuple[str, ...], ...]:
    """Parse a phrase pattern like '{my|your|at} work' into per-position
    alternative sets."""
    slots = []
    for part in text.split():
        if part.startswith("{") and part.endswith("}"):
            slots.append(tuple(p for p in part[1:-1].split("|") if p))
        else:
            slots.append((part,))
    return tuple(slots)


@dataclass
class FilterRules:
    include_terms: frozenset[str]
    include_phrases: tuple[tuple[tuple[str, ...], ...], ...]
    exclude_terms: frozenset[str]
    exclude_phrases: tuple[tuple[tuple[str, ...], ...], ...]
    min_tokens: int = 5

    def __post_init__(self):
        if self.min_tokens < 1:
            raise DataError("min_tokens must be >= 1")

    @classmethod
    def default(cls) -> "FilterRules":
        return cls(
            include_terms=frozenset({"job", "jobless", "manager", "boss"}),
            include_phrases=(
                _parse_phrase("{my|your|his|her|their|at} work"),
            ),
            exclude_terms=frozenset(
                {"school", "class", "homework", "student", "course"}
            ),
            exclude_phrases=(_parse_phrase("{good|nice|great} job"),),
            min_tokens=5,
        )

    @classmethod
    def from_file(cls, path) -> "FilterRules":
        sections: dict[str, list[str]] = {
            "include_terms": [],
            "include_phrases": [],
            "exclude_terms": [],
            "exclude_phrases": [],
            "min_tokens": [],
        }
        current = None
        for raw in Path(path).read_text(encoding="utf-8").splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            m = re.fullmatch(r"\[(\w+)\]", line)
            if m:
                name = m.group(1)
                if name not in sections:
                    raise DataError(f"unknown rules section [{name}]")
                current = name
                continue
            if current is None:
                raise DataError(f"rule entry outside a section: {line!r}")
            sections[current].append(line.lower())
        min_tokens = 5
        if sections["min_tokens"]:
            min_tokens = int(sections["min_tokens"][-1])
        return cls(
            include_terms=frozenset(sections["include_terms"]),
            include_phrases=tuple(
                _parse_phrase(p) for p in sections["include_phrases"]
            ),
            exclude_terms=frozenset(sections["exclude_terms"]),
            exclude_phrases=tuple(
                _parse_phrase(p) for p in sections["exclude_phrases"]
            ),
            min_tokens=min_tokens,
        )


def _parse_instant(value: str) -> datetime:
    ts = datetime.fromisoformat(value.replace("Z", "+00:00"))
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def tweet_from_record(rec: dict) -> Tweet:
    try:
        return Tweet(
            id=str(rec["id"]),
            account_id=str(rec["account_id"]),
            created_at_utc=_parse_instant(rec["created_at_utc"]),
            text=str(rec["text"]),
            latitude=rec.get("latitude"),
            longitude=rec.get("longitude"),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise DataError(f"malformed tweet record: {exc}") from exc


def ingest_jsonl(path) -> Corpus:
    """Read one JSON tweet per line; malformed lines are skipped and counted
    in the corpus provenance under 'skipped_lines'."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"input file not found: {path}")
    tweets = []
    skipped = 0
    for lineno, line in enumerate(
        path.read_text(encoding="utf-8").splitlines(), start=1
    ):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            if not isinstance(rec, dict):
                raise DataError("line is not a JSON object")
            tweets.append(tweet_from_record(rec))
        except (json.JSONDecodeError, DataError):
            skipped += 1
    return Corpus(
        tweets,
        provenance={
            "source": str(path),
            "ingested_at": datetime.now(timezone.utc).isoformat(),
            "skipped_lines": skipped,
        },
    )


def write_jsonl(corpus: Corpus, path, extra: Optional[dict] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for t in corpus:
            rec = {
                "id": t.id,
                "account_id": t.account_id,
                "created_at_utc": t.created_at_utc.isoformat().replace(
                    "+00:00", "Z"
                ),
                "text": t.text,
            }
            if t.latitude is not None:
                rec["latitude"] = t.latitude
            if t.longitude is not None:
                rec["longitude"] = t.longitude
            if extra:
                rec.update(extra)
            fh.write(json.dumps(rec) + "\n")


def _normalize_token(token: str, slang: Optional[SlangDictionary]) -> list[str]:
    if token == URL_PLACEHOLDER or _URL_RE.match(token):
        return [URL_PLACEHOLDER]
    if token.startswith("@") and len(token) > 1:
        return [MENTION_PLACEHOLDER]
    hashtag = token.startswith("#")
    cleaned = "".join(c for c in token.lower() if c.isalnum())
    if not cleaned:
        return []
    if hashtag:
        return ["#" + cleaned]
    if slang is not None:
        expansion = slang.get(cleaned)
        if expansion is not None:
            return expansion.lower().split()
    return [cleaned]


def normalize_text(text: str, slang: Optional[SlangDictionary] = None) -> str:
    """Lowercase, strip punctuation/emoticons, expand slang, and replace
    mentions/URLs by placeholder tokens. Idempotent."""
    out: list[str] = []
    for token in text.split():
        out.extend(_normalize_token(token, slang))
    return " ".join(out)


def tokenize(text: str) -> list[str]:
    return text.split()


def _phrase_matches(tokens: Sequence[str], phrase) -> bool:
    n = len(phrase)
    for start in range(len(tokens) - n + 1):
        if all(tokens[start + i] in phrase[i] for i in range(n)):
            return True
    return False


def matches_rules(tokens: Sequence[str], rules: FilterRules) -> bool:
    """True iff the token list passes the Job-Likely filter. Exclusion wins
    over inclusion."""
    if len(tokens) < rules.min_tokens:
        return False
    token_set = set(tokens)
    if token_set & rules.exclude_terms:
        return False
    if any(_phrase_matches(tokens, p) for p in rules.exclude_phrases):
        return False
    if token_set & rules.include_terms:
        return True
    return any(_phrase_matches(tokens, p) for p in rules.include_phrases)


def job_likely_filter(
    corpus: Corpus,
    rules: Optional[FilterRules] = None,
    slang: Optional[SlangDictionary] = None,
) -> Corpus:
    """Retain tweets passing the inclusion/exclusion rules on normalized
    tokens, with the minimum-length threshold applied first."""
    rules = rules or FilterRules.default()
    kept = [
        t
        for t in corpus
        if matches_rules(tokenize(normalize_text(t.text, slang)), rules)
    ]
    return Corpus(
        kept,
        provenance={**corpus.provenance, "filtered_from": len(corpus)},
    )


def normalize_corpus(
    corpus: Corpus, slang: Optional[SlangDictionary] = None
) -> Corpus:
    """Return a corpus whose tweet texts are normalized."""
    tweets = [
        Tweet(
            id=t.id,
            account_id=t.account_id,
            created_at_utc=t.created_at_utc,
            text=normalize_text(t.text, slang),
            latitude=t.latitude,
            longitude=t.longitude,
        )
        for t in corpus
    ]
    return Corpus(tweets, provenance=dict(corpus.provenance))
