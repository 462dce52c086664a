"""jobtalk: humans-in-the-loop detection and analytics of job-related
short messages."""

__version__ = "0.1.0"

from .corpus import (
    Corpus,
    DataError,
    FilterRules,
    SlangDictionary,
    Tweet,
    ingest_jsonl,
    job_likely_filter,
    normalize_text,
    tokenize,
)

__all__ = [
    "Corpus",
    "DataError",
    "FilterRules",
    "SlangDictionary",
    "Tweet",
    "ingest_jsonl",
    "job_likely_filter",
    "normalize_text",
    "tokenize",
    "__version__",
]
