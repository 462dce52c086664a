"""Word-category lexica with prefix wildcards, and category ratio scoring."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .corpus import DataError


@dataclass
class Lexicon:
    categories: dict[str, tuple[frozenset[str], frozenset[str]]]
    source: str = ""

    def category_names(self) -> list[str]:
        return sorted(self.categories)

    def term_counts(self) -> dict[str, int]:
        return {
            name: len(lits) + len(prefs)
            for name, (lits, prefs) in self.categories.items()
        }


@dataclass
class CategoryScore:
    category: str
    match_count: int
    total_tokens: int

    @property
    def ratio(self) -> float:
        if self.total_tokens == 0:
            return 0.0
        return self.match_count / self.total_tokens


def load_lexicon(path) -> Lexicon:
    """Sectioned lexicon file: [Category] headers, one term per line,
    trailing '*' marks a prefix wildcard, '#' starts a comment."""
    path = Path(path)
    categories: dict[str, tuple[set[str], set[str]]] = {}
    current = None
    for raw in path.read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if name in categories:
                raise DataError(f"duplicate lexicon category [{name}]")
            categories[name] = (set(), set())
            current = name
            continue
        if current is None:
            raise DataError(f"lexicon term outside any category: {line!r}")
        for term in (t.strip().lower() for t in line.split(",")):
            if not term:
                continue
            literals, prefixes = categories[current]
            if term.endswith("*"):
                prefixes.add(term[:-1])
            else:
                literals.add(term)
    for name, (literals, prefixes) in categories.items():
        if not literals and not prefixes:
            warnings.warn(f"lexicon category [{name}] is empty")
    return Lexicon(
        categories={
            name: (frozenset(lits), frozenset(prefs))
            for name, (lits, prefs) in categories.items()
        },
        source=str(path),
    )


def token_matches(token: str, literals: frozenset[str],
                  prefixes: frozenset[str]) -> bool:
    if token in literals:
        return True
    return any(token.startswith(p) for p in prefixes)


def score_category(
    tokens: Sequence[str], lexicon: Lexicon, category: str
) -> CategoryScore:
    """Fraction of token positions matching the category; a token matching
    both a literal and a prefix counts once."""
    if category not in lexicon.categories:
        raise DataError(f"unknown lexicon category: {category!r}")
    literals, prefixes = lexicon.categories[category]
    matches = sum(
        1 for t in tokens if token_matches(t.lower(), literals, prefixes)
    )
    return CategoryScore(category, matches, len(tokens))
