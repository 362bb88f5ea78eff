"""Article ingestion, text normalization, sentence splitting and tokenization.

Everything downstream (keyword tagging, metric scoring, embeddings) consumes
the units produced here, so the rules are deliberately simple, deterministic
and order-insensitive: articles can be processed in any order and in parallel
without changing any aggregate.
"""

from __future__ import annotations

import datetime as dt
import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from .errors import DataError
from ._data import data_text

__all__ = [
    "Article",
    "Sentence",
    "MonthKey",
    "SkipRecord",
    "load_corpus",
    "iter_corpus",
    "write_corpus",
    "write_skip_report",
    "split_sentences",
    "tokenize",
    "month_key",
    "article_sentences",
    "headline_sentence",
]

_ARTICLE_FIELDS = ("id", "outlet", "published", "headline", "content")

# Maximal runs of letters/digits, optionally chained by internal
# apostrophes/hyphens ("Congress-led", "don't"). Case is preserved.
_TOKEN_RE = re.compile(r"[^\W_]+(?:['’\-][^\W_]+)*")

# Candidate sentence boundary: terminal punctuation, optional closing
# quote/bracket, whitespace, then an optional opening quote and a capital.
_BOUNDARY_RE = re.compile(r"[.!?]+[\"'’”)\]]*\s+[\"'‘“(\[]*[A-Z]")


def _load_abbreviations() -> frozenset[str]:
    entries = set()
    for line in data_text("abbreviations.txt").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            entries.add(line)
    return frozenset(entries)


_ABBREVIATIONS = _load_abbreviations()


@dataclass(frozen=True, order=True)
class MonthKey:
    """A civil (year, month) bucket; totally ordered and formatted YYYY-MM."""

    year: int
    month: int

    def __post_init__(self) -> None:
        if not 1 <= self.month <= 12:
            raise ValueError(f"month out of range: {self.month}")

    def __str__(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"

    @classmethod
    def parse(cls, text: str) -> "MonthKey":
        year, _, month = text.partition("-")
        return cls(int(year), int(month))

    def next(self) -> "MonthKey":
        if self.month == 12:
            return MonthKey(self.year + 1, 1)
        return MonthKey(self.year, self.month + 1)


@dataclass(frozen=True)
class Article:
    """One news item; the ingestion unit."""

    id: str
    outlet: str
    published: dt.date
    headline: str
    content: str

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "outlet": self.outlet,
            "published": self.published.isoformat(),
            "headline": self.headline,
            "content": self.content,
        }


@dataclass(frozen=True)
class Sentence:
    """A sentence (or headline treated as one) with its word tokens."""

    article_id: str
    index: int
    text: str
    tokens: tuple[str, ...]

    @property
    def word_count(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class SkipRecord:
    """Why a corpus line was rejected during ingestion."""

    line: int
    reason: str


def tokenize(text: str) -> list[str]:
    """Split text into word tokens.

    Tokens are maximal runs of letters/digits; apostrophes and hyphens are
    kept when they sit between such runs, so "Congress-led" stays one token.
    All other punctuation is dropped and case is preserved.
    """
    return _TOKEN_RE.findall(text)


def split_sentences(text: str) -> list[str]:
    """Split text into sentence spans.

    A boundary is terminal punctuation (., !, ?) followed by whitespace and a
    capital letter, unless the token ending at the punctuation is a known
    abbreviation (e.g. "Mr.", "U.S.") or a single-letter initial ("J."). The
    returned spans cover all non-whitespace input; a trailing fragment without
    terminal punctuation is returned as the final span.
    """
    spans: list[str] = []
    start = 0
    pos = 0
    while True:
        match = _BOUNDARY_RE.search(text, pos)
        if match is None:
            break
        punct_end = match.start() + 1
        while punct_end < len(text) and text[punct_end] in ".!?":
            punct_end += 1
        while punct_end < len(text) and text[punct_end] in "\"'’”)]":
            punct_end += 1
        if _is_abbreviation_boundary(text, match.start()):
            pos = match.start() + 1
            continue
        spans.append(text[start:punct_end].strip())
        start = punct_end
        pos = match.end() - 1  # the capital may start the next boundary's sentence
    tail = text[start:].strip()
    if tail:
        spans.append(tail)
    return [s for s in spans if s]


def _is_abbreviation_boundary(text: str, punct_pos: int) -> bool:
    """True when the punctuation at punct_pos ends a guarded abbreviation."""
    if text[punct_pos] != ".":
        return False
    word_start = punct_pos
    while word_start > 0 and not text[word_start - 1].isspace():
        word_start -= 1
    word = text[word_start : punct_pos + 1]
    word = word.lstrip("\"'‘“([")
    if word in _ABBREVIATIONS:
        return True
    # Single-letter initials such as "J. Nehru".
    return len(word) == 2 and word[0].isalpha() and word[0].isupper()


def month_key(date: dt.date) -> MonthKey:
    """Bucket a publication date into its civil month."""
    return MonthKey(date.year, date.month)


def iter_corpus(path: str | Path, skips: list[SkipRecord] | None = None) -> Iterator[Article]:
    """Yield articles from a JSONL file in file order.

    Malformed records are appended to `skips` (when given) and skipped; only
    an unreadable file aborts the stream.
    """
    path = Path(path)
    try:
        handle = path.open("r", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read corpus file {path}: {exc}") from exc
    seen_ids: set[str] = set()
    with handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            article, reason = _parse_record(line)
            if article is not None and article.id in seen_ids:
                article, reason = None, f"duplicate id: {article.id}"
            if article is None:
                if skips is not None:
                    skips.append(SkipRecord(line=lineno, reason=reason))
                continue
            seen_ids.add(article.id)
            yield article


def load_corpus(path: str | Path) -> tuple[list[Article], list[SkipRecord]]:
    """Load a JSONL corpus, returning (articles, skip report)."""
    skips: list[SkipRecord] = []
    articles = list(iter_corpus(path, skips))
    return articles, skips


def _parse_record(line: str) -> tuple[Article | None, str]:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        return None, f"invalid JSON: {exc.msg}"
    if not isinstance(record, dict):
        return None, "record is not a JSON object"
    for name in _ARTICLE_FIELDS:
        if name not in record:
            return None, f"missing field: {name}"
        if not isinstance(record[name], str):
            return None, f"field is not a string: {name}"
    if not record["id"]:
        return None, "empty id"
    try:
        published = dt.date.fromisoformat(record["published"])
    except ValueError:
        return None, f"invalid date: {record['published']!r}"
    return (
        Article(
            id=record["id"],
            outlet=record["outlet"],
            published=published,
            headline=record["headline"],
            content=record["content"],
        ),
        "",
    )


def write_corpus(articles: Iterable[Article], path: str | Path) -> None:
    """Serialize articles as JSONL (inverse of load_corpus)."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as handle:
        for article in articles:
            handle.write(json.dumps(article.to_record(), ensure_ascii=False) + "\n")


def write_skip_report(skips: Iterable[SkipRecord], path: str | Path) -> None:
    """Write the skip report as JSONL of {"line": int, "reason": str}."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as handle:
        for skip in skips:
            handle.write(json.dumps({"line": skip.line, "reason": skip.reason}) + "\n")


def article_sentences(article: Article) -> list[Sentence]:
    """Split an article's content into indexed, tokenized sentences."""
    return [
        Sentence(article_id=article.id, index=i, text=span, tokens=tuple(tokenize(span)))
        for i, span in enumerate(split_sentences(article.content))
    ]


def headline_sentence(article: Article) -> Sentence:
    """Treat the whole headline as a single sentence unit."""
    return Sentence(
        article_id=article.id,
        index=0,
        text=article.headline,
        tokens=tuple(tokenize(article.headline)),
    )
