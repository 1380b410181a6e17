"""Top-k query execution: document-at-a-time over the postings lists with a
bounded min-heap of size k.

Candidate documents are those containing at least one query term; QL
scorers still apply their full formula (background probabilities included)
to every candidate. ``exhaustive=True`` widens the candidate set to the
whole collection, which matters only for QL scorers and exists for oracle
comparisons. Ties are broken by ascending doc id.
"""

from __future__ import annotations

import heapq
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .analysis import AnalyzerConfig, DEFAULT_CONFIG, terms as analyze_terms
from .corpus import QueryRecord
from .errors import DuplicateIdError
from .index import InvertedIndex
from .scoring import DocScorer, default_params, make_scorer

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScoredDoc:
    doc_id: str
    score: float


# RunRanking: query id -> ranked results, in query-file order
RunRanking = dict[str, list[ScoredDoc]]


class _ReversedId:
    """Wraps a doc id so the min-heap treats larger ids as worse."""

    __slots__ = ("value",)

    def __init__(self, value: str):
        self.value = value

    def __lt__(self, other: "_ReversedId") -> bool:
        return self.value > other.value


def _iter_candidates(index: InvertedIndex, terms: Sequence[str],
                     exhaustive: bool) -> Iterator[tuple[int, dict[str, int]]]:
    """Yield (ordinal, term -> tf) for candidate docs in ordinal order."""
    if exhaustive:
        postings = {t: index.lookup(t) for t in terms}
        for ordinal in range(index.n_docs):
            tfs = {}
            for term, plist in postings.items():
                tf = index.tf(term, ordinal)
                if tf:
                    tfs[term] = tf
            yield ordinal, tfs
        return

    lists = [(t, index.lookup(t)) for t in terms]
    lists = [(t, p) for t, p in lists if p]
    if not lists:
        return
    cursors = [0] * len(lists)
    while True:
        current = None
        for (term, plist), pos in zip(lists, cursors):
            if pos < len(plist) and (current is None or plist[pos].doc < current):
                current = plist[pos].doc
        if current is None:
            return
        tfs = {}
        for i, ((term, plist), pos) in enumerate(zip(lists, cursors)):
            if pos < len(plist) and plist[pos].doc == current:
                tfs[term] = plist[pos].tf
                cursors[i] = pos + 1
        yield current, tfs


def _top_k(index: InvertedIndex, unique_terms: Sequence[str], scorer: DocScorer,
           k: int, exhaustive: bool, keep_zero: bool) -> list[ScoredDoc]:
    heap: list[tuple[float, _ReversedId]] = []
    for ordinal, tfs in _iter_candidates(index, unique_terms, exhaustive):
        score = scorer(tfs, index.doc_lengths[ordinal])
        if score == 0.0 and not keep_zero:
            continue
        entry = (score, _ReversedId(index.doc_ids[ordinal]))
        if len(heap) < k:
            heapq.heappush(heap, entry)
        elif entry > heap[0]:
            heapq.heapreplace(heap, entry)
    ranked = sorted(heap, key=lambda e: (-e[0], e[1].value))
    return [ScoredDoc(rev.value, score) for score, rev in ranked]


def search(index: InvertedIndex, query: str, scorer: str = "bm25",
           params=None, k: int = 1000, config: AnalyzerConfig = DEFAULT_CONFIG,
           exhaustive: bool = False) -> list[ScoredDoc]:
    """Rank the top-k documents for ``query`` under the named scorer.

    A query that analyzes to zero tokens logs a warning and returns no
    results. BM25 excludes zero-scoring documents, so results always
    contain at least one query term.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    terms = analyze_terms(query, config)
    if not terms:
        log.warning("query %r analyzed to zero tokens; returning no results", query)
        return []
    weighted = [(t, float(c)) for t, c in Counter(terms).items()]
    return _search_prepared(index, weighted, scorer, params, k, exhaustive)


def _search_prepared(index: InvertedIndex, weighted: list[tuple[str, float]],
                     scorer: str, params, k: int, exhaustive: bool) -> list[ScoredDoc]:
    doc_scorer = make_scorer(scorer, index, weighted, params)
    unique_terms = [t for t, _ in weighted]
    keep_zero = scorer != "bm25"
    return _top_k(index, unique_terms, doc_scorer, k, exhaustive, keep_zero)


def run_batch(index: InvertedIndex, queries: Iterable[QueryRecord],
              scorer: str = "bm25", params=None, k: int = 1000,
              config: AnalyzerConfig = DEFAULT_CONFIG,
              exhaustive: bool = False) -> RunRanking:
    """Execute a query batch; one entry per query id in input order."""
    if params is None:
        params = default_params(scorer)
    run: RunRanking = {}
    for record in queries:
        if record.id in run:
            raise DuplicateIdError(f"duplicate query id {record.id!r}")
        run[record.id] = search(index, record.text, scorer, params, k,
                                config, exhaustive)
    return run


def write_run(run: RunRanking, out, tag: str = "docxp") -> None:
    """Write a ranking in the 6-column TREC run format."""
    for qid, results in run.items():
        for rank, hit in enumerate(results, start=1):
            out.write(f"{qid} Q0 {hit.doc_id} {rank} {hit.score:.6f} {tag}\n")


def load_run(path) -> RunRanking:
    """Read a 6-column TREC run file back into a RunRanking."""
    from .errors import FormatError

    run: RunRanking = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 6:
                raise FormatError("expected 6 whitespace-separated columns",
                                  path=str(path), line=lineno)
            qid, _, doc_id, _, score, _ = parts
            run.setdefault(qid, []).append(ScoredDoc(doc_id, float(score)))
    return run
