"""Retrieval-based pseudo annotation: (passage, query) training pairs.

Out-of-domain queries are issued against an unlabeled target corpus and
the top-k retrieved documents are treated as relevant to the query.
Documents longer than the passage budget are cut to their head window
(leading whole sentences totaling at least the budget, last sentence may
spill over), matching what a passage-level generator can consume.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, TextIO

from .analysis import AnalyzerConfig, DEFAULT_CONFIG
from .corpus import Document, QueryRecord
from .index import InvertedIndex
from .search import search
from .segmentation import segment_concat

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainingPair:
    passage_text: str
    query_text: str
    source_query_id: str
    rank: int
    score: float


def head_passage(doc: Document, max_tokens: int,
                 config: AnalyzerConfig = DEFAULT_CONFIG) -> str:
    """Leading whole-sentence window of about ``max_tokens`` tokens."""
    windows = segment_concat(doc, max_tokens, max(1, max_tokens // 2), config)
    return windows[0].text if windows else ""


def generate_pairs(index: InvertedIndex, docs: Mapping[str, str],
                   queries: Iterable[QueryRecord], scorer: str = "bm25",
                   params=None, k: int = 1, max_passage_tokens: int = 60,
                   config: AnalyzerConfig = DEFAULT_CONFIG) -> Iterator[TrainingPair]:
    """Yield pairs in query order; each of a query's top-k hits becomes one pair.

    ``docs`` maps doc id to original text (the index holds no text).
    Queries retrieving nothing produce nothing.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    for record in queries:
        hits = search(index, record.text, scorer, params, k, config)
        if not hits:
            log.info("query %s retrieved no documents; no pairs emitted", record.id)
            continue
        for rank, hit in enumerate(hits, start=1):
            doc = Document(hit.doc_id, docs[hit.doc_id])
            passage = head_passage(doc, max_passage_tokens, config)
            if not passage:
                log.info("document %s is empty; pair skipped", hit.doc_id)
                continue
            yield TrainingPair(passage, record.text, record.id, rank, hit.score)


def write_pairs(pairs: Iterable[TrainingPair], out: TextIO) -> int:
    """Serialize pairs as jsonl; returns the number written."""
    count = 0
    for pair in pairs:
        out.write(json.dumps({
            "query": pair.query_text,
            "passage": pair.passage_text,
            "qid": pair.source_query_id,
            "rank": pair.rank,
            "score": round(pair.score, 6),
        }, ensure_ascii=False) + "\n")
        count += 1
    return count
