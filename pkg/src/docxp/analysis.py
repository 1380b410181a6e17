"""Deterministic text analysis: tokenization and sentence splitting.

Every component that touches text (indexing, scoring, segmentation,
evaluation) goes through this module, so token identity is consistent
end to end.

Rules:
- tokens are maximal runs of Unicode letters/digits, lowercased;
  everything else (punctuation, underscores, whitespace) splits
- optional stopword removal; positions are assigned after filtering so
  they stay gapless
- sentence boundaries: '.', '!' or '?' followed by whitespace, or a
  blank line; text with no terminator is one sentence
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import NamedTuple

# \w minus underscore = Unicode letters and digits
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


class Token(NamedTuple):
    term: str
    position: int


@dataclass(frozen=True)
class AnalyzerConfig:
    """Analyzer settings; default is lowercase tokenization with no stopwords."""

    stopwords: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "stopwords", frozenset(w.lower() for w in self.stopwords))


DEFAULT_CONFIG = AnalyzerConfig()


def terms(text: str, config: AnalyzerConfig = DEFAULT_CONFIG) -> list[str]:
    """Term sequence of ``text`` (the cheap path used by indexing)."""
    out = _TOKEN_RE.findall(text.lower())
    if config.stopwords:
        out = [t for t in out if t not in config.stopwords]
    return out


def analyze(text: str, config: AnalyzerConfig = DEFAULT_CONFIG) -> list[Token]:
    """Tokenize ``text`` into positioned tokens.

    Positions are 0-based and gapless over the post-filter stream.
    """
    return [Token(t, i) for i, t in enumerate(terms(text, config))]


@dataclass(frozen=True)
class Sentence:
    """A sentence and its half-open [start, end) span over the document's tokens."""

    text: str
    start: int
    end: int

    @property
    def token_count(self) -> int:
        return self.end - self.start


def _sentence_chunks(text: str) -> list[str]:
    """Split raw text into sentence chunks by the terminator rules."""
    chunks: list[str] = []
    start = 0
    n = len(text)
    i = 0
    while i < n:
        ch = text[i]
        if ch in ".!?" and i + 1 < n and text[i + 1].isspace():
            chunks.append(text[start:i + 1])
            start = i + 1
        elif ch == "\n" and i + 1 < n and text[i + 1] == "\n":
            chunks.append(text[start:i + 1])
            start = i + 1
        i += 1
    if start < n:
        chunks.append(text[start:])
    return chunks


def split_sentences(text: str, config: AnalyzerConfig = DEFAULT_CONFIG) -> list[Sentence]:
    """Split ``text`` into sentences with token spans computed via ``analyze``.

    Terminator characters are split points for the tokenizer as well, so a
    token never straddles a sentence boundary and the spans partition the
    document's token stream exactly. Chunks that analyze to zero tokens
    (punctuation-only) are dropped.
    """
    sentences: list[Sentence] = []
    offset = 0
    for chunk in _sentence_chunks(text):
        count = len(terms(chunk, config))
        if count == 0:
            continue
        sentences.append(Sentence(chunk.strip(), offset, offset + count))
        offset += count
    return sentences
