"""Party keyword matching and assembly of monthly per-party documents.

A party lexicon is a set of keyword phrases. A text mentions a party when one
of its phrases occurs as a whole-token subsequence; all-uppercase lexicon
entries (acronyms such as "BJP" or "INC") match case-sensitively so that
common words ("inc.") cannot collide, while multi-word proper names match
case-insensitively. Hyphenated compounds are split before matching, so
"Congress-led" still mentions "Congress".
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .corpus import Article, MonthKey, Sentence, article_sentences, headline_sentence, month_key, tokenize
from .errors import ConfigError
from ._data import data_path

__all__ = [
    "HEADLINE",
    "CONTENT",
    "PartyLexicon",
    "PhraseMatcher",
    "MonthlyDocument",
    "load_party_lexicons",
    "default_party_lexicons",
    "build_matcher",
    "match_parties",
    "build_monthly_documents",
    "get_document",
    "expand_hyphens",
]

HEADLINE = "headline"
CONTENT = "content"
_MODES = (HEADLINE, CONTENT)


@dataclass(frozen=True)
class PartyLexicon:
    """A party identifier and the keyword phrases that signal a mention."""

    party_id: str
    phrases: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.phrases:
            raise ConfigError(f"lexicon for {self.party_id!r} has no phrases")


@dataclass
class MonthlyDocument:
    """All units (headlines or content sentences) matching one party in one month."""

    month: MonthKey
    party_id: str
    mode: str
    units: list[Sentence] = field(default_factory=list)

    @property
    def total_words(self) -> int:
        return sum(unit.word_count for unit in self.units)


def expand_hyphens(tokens: Sequence[str]) -> list[str]:
    """Split hyphenated compounds into their parts for matching purposes."""
    expanded: list[str] = []
    for token in tokens:
        if "-" in token:
            expanded.extend(part for part in token.split("-") if part)
        else:
            expanded.append(token)
    return expanded


class PhraseMatcher:
    """Matches labeled phrases as whole-token subsequences.

    Phrases are tokenized with the corpus tokenizer and compared against the
    hyphen-expanded token sequence. When `acronyms_case_sensitive` is set,
    all-uppercase phrases compare exactly; everything else compares lowercase.
    """

    def __init__(self, phrases: Iterable[tuple[str, str]], acronyms_case_sensitive: bool = True):
        # first token -> list of (remaining tokens, label, case_sensitive)
        self._exact: dict[str, list[tuple[tuple[str, ...], str]]] = defaultdict(list)
        self._folded: dict[str, list[tuple[tuple[str, ...], str]]] = defaultdict(list)
        for label, phrase in phrases:
            tokens = expand_hyphens(tokenize(phrase))
            if not tokens:
                raise ConfigError(f"phrase for {label!r} has no word tokens: {phrase!r}")
            if acronyms_case_sensitive and phrase.isupper():
                self._exact[tokens[0]].append((tuple(tokens[1:]), label))
            else:
                folded = tuple(t.lower() for t in tokens)
                self._folded[folded[0]].append((folded[1:], label))

    def match_tokens(self, tokens: Sequence[str]) -> set[str]:
        """Labels whose phrase occurs in the (hyphen-expanded) token sequence."""
        expanded = expand_hyphens(tokens)
        folded = [t.lower() for t in expanded]
        found: set[str] = set()
        for i, token in enumerate(expanded):
            for rest, label in self._exact.get(token, ()):
                if label not in found and tuple(expanded[i + 1 : i + 1 + len(rest)]) == rest:
                    found.add(label)
            for rest, label in self._folded.get(folded[i], ()):
                if label not in found and tuple(folded[i + 1 : i + 1 + len(rest)]) == rest:
                    found.add(label)
        return found

    def match_spans(self, tokens: Sequence[str]) -> list[tuple[int, int, str]]:
        """All phrase occurrences as (start, end_exclusive, label) over expanded tokens."""
        expanded = expand_hyphens(tokens)
        folded = [t.lower() for t in expanded]
        spans: list[tuple[int, int, str]] = []
        for i, token in enumerate(expanded):
            for rest, label in self._exact.get(token, ()):
                if tuple(expanded[i + 1 : i + 1 + len(rest)]) == rest:
                    spans.append((i, i + 1 + len(rest), label))
            for rest, label in self._folded.get(folded[i], ()):
                if tuple(folded[i + 1 : i + 1 + len(rest)]) == rest:
                    spans.append((i, i + 1 + len(rest), label))
        return spans


def load_party_lexicons(path: str | Path) -> list[PartyLexicon]:
    """Load party lexicons from a JSON file of {party_id: [phrase, ...]}.

    Order in the file is preserved: the first party plays the role of the
    positive direction in directed imbalance scores.
    """
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot load party lexicons from {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"party lexicon file must be a JSON object: {path}")
    lexicons = []
    seen: dict[str, str] = {}
    for party_id, phrases in raw.items():
        if not isinstance(phrases, list) or not all(isinstance(p, str) for p in phrases):
            raise ConfigError(f"phrases for {party_id!r} must be a list of strings")
        for phrase in phrases:
            owner = seen.setdefault(phrase, party_id)
            if owner != party_id:
                raise ConfigError(f"phrase {phrase!r} appears in both {owner!r} and {party_id!r}")
        lexicons.append(PartyLexicon(party_id=party_id, phrases=tuple(phrases)))
    return lexicons


def default_party_lexicons() -> list[PartyLexicon]:
    """The two shipped lexicons (BJP first, Congress second)."""
    return load_party_lexicons(data_path("party_lexicons.json"))


def build_matcher(lexicons: Sequence[PartyLexicon]) -> PhraseMatcher:
    return PhraseMatcher(
        (lex.party_id, phrase) for lex in lexicons for phrase in lex.phrases
    )


def match_parties(text: str | Sequence[str], lexicons: Sequence[PartyLexicon]) -> set[str]:
    """Party ids whose lexicon matches the given text (or token sequence)."""
    tokens = tokenize(text) if isinstance(text, str) else text
    return build_matcher(lexicons).match_tokens(tokens)


def build_monthly_documents(
    articles: Iterable[Article],
    lexicons: Sequence[PartyLexicon],
    mode: str,
) -> dict[tuple[MonthKey, str], MonthlyDocument]:
    """Bucket matching units into per-(month, party) documents.

    In headline mode the whole headline is the unit (one per matching article
    per party); in content mode every matching sentence is a unit. A unit that
    matches several parties is included in each of their documents.
    """
    if mode not in _MODES:
        raise ConfigError(f"unknown mode {mode!r}; expected one of {_MODES}")
    matcher = build_matcher(lexicons)
    docs: dict[tuple[MonthKey, str], MonthlyDocument] = {}
    for article in articles:
        month = month_key(article.published)
        units = [headline_sentence(article)] if mode == HEADLINE else article_sentences(article)
        for unit in units:
            for party_id in matcher.match_tokens(unit.tokens):
                key = (month, party_id)
                doc = docs.get(key)
                if doc is None:
                    doc = docs[key] = MonthlyDocument(month=month, party_id=party_id, mode=mode)
                doc.units.append(unit)
    # Deterministic unit order regardless of input order (article ids are unique).
    for doc in docs.values():
        doc.units.sort(key=lambda u: (u.article_id, u.index))
    return docs


def get_document(
    docs: Mapping[tuple[MonthKey, str], MonthlyDocument],
    month: MonthKey,
    party_id: str,
    mode: str,
) -> MonthlyDocument:
    """Fetch a document, falling back to an empty one for uncovered months."""
    doc = docs.get((month, party_id))
    if doc is None:
        return MonthlyDocument(month=month, party_id=party_id, mode=mode)
    return doc
