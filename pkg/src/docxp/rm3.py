"""RM3 pseudo-relevance feedback on top of any first-pass scorer.

Expansion procedure:
 1. take the top fb_docs first-pass results
 2. doc weight by shifted-normalized retrieval score:
    w_d = (s_d - min_s + eps) / sum_d' (s_d' - min_s + eps), eps = 1e-6
 3. relevance model P_rm(t) proportional to sum_d w_d * c(t,d)/|d|
 4. keep the top fb_terms terms (ties lexicographic), renormalize
 5. interpolate with the normalized original query distribution:
    P'(t) = alpha*P_q(t) + (1-alpha)*P_rm(t), then renormalize

Terms occurring in every document (df = N) are excluded from the
relevance model by default; stopword-like mass otherwise dominates the
feedback terms. Disable with ``exclude_ubiquitous=False``.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field

from .analysis import AnalyzerConfig, DEFAULT_CONFIG, terms as analyze_terms
from .index import InvertedIndex
from .search import ScoredDoc, _search_prepared, search

log = logging.getLogger(__name__)

EPS = 1e-6


@dataclass(frozen=True)
class RM3Params:
    fb_docs: int = 10
    fb_terms: int = 10
    alpha: float = 0.5
    exclude_ubiquitous: bool = True

    def __post_init__(self):
        if self.fb_docs < 1:
            raise ValueError(f"fb_docs must be >= 1, got {self.fb_docs}")
        if self.fb_terms < 1:
            raise ValueError(f"fb_terms must be >= 1, got {self.fb_terms}")
        if not 0 <= self.alpha <= 1:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")


@dataclass
class WeightedQuery:
    """Unique terms with strictly positive weights summing to 1."""

    weights: dict[str, float] = field(default_factory=dict)

    def items(self):
        return self.weights.items()

    def __len__(self) -> int:
        return len(self.weights)

    def check_normalized(self, tol: float = 1e-9) -> None:
        total = sum(self.weights.values())
        if abs(total - 1.0) > tol:
            raise ValueError(f"weights sum to {total}, expected 1")
        if any(w <= 0 for w in self.weights.values()):
            raise ValueError("weights must be strictly positive")


def _normalized_query(terms: list[str]) -> WeightedQuery:
    counts = Counter(terms)
    total = sum(counts.values())
    return WeightedQuery({t: c / total for t, c in sorted(counts.items())})


def rm3_expand(index: InvertedIndex, query: str, first_pass: list[ScoredDoc],
               params: RM3Params = RM3Params(),
               config: AnalyzerConfig = DEFAULT_CONFIG,
               feedback_index: InvertedIndex | None = None) -> WeightedQuery:
    """Expand ``query`` against its first-pass ranking.

    Feedback term statistics come from ``feedback_index`` when given (to
    read feedback text from a different index build), else from ``index``.
    An empty first pass degrades to the normalized original query.
    """
    query_terms = analyze_terms(query, config)
    if not query_terms:
        raise ValueError("query analyzed to zero tokens")
    original = _normalized_query(query_terms)
    if not first_pass:
        log.warning("empty first pass for query %r; returning original query", query)
        return original
    if params.alpha == 1.0:
        # interpolation collapses to the original query distribution
        return original

    fb = feedback_index if feedback_index is not None else index
    top = first_pass[:params.fb_docs]

    min_score = min(hit.score for hit in top)
    shifted = [hit.score - min_score + EPS for hit in top]
    denom = sum(shifted)
    doc_weights = [s / denom for s in shifted]

    relevance: dict[str, float] = {}
    for hit, w_d in zip(top, doc_weights):
        ordinal = fb.ordinal_of(hit.doc_id)
        length = fb.doc_lengths[ordinal]
        if length == 0:
            continue
        for term, tf in fb.doc_vector(ordinal).items():
            if params.exclude_ubiquitous and fb.df(term) == fb.n_docs:
                continue
            relevance[term] = relevance.get(term, 0.0) + w_d * tf / length

    # top fb_terms by weight, ties lexicographic, then renormalize
    kept = sorted(relevance.items(), key=lambda item: (-item[1], item[0]))[:params.fb_terms]
    rm_total = sum(w for _, w in kept)
    rm = {t: w / rm_total for t, w in kept} if rm_total > 0 else {}

    alpha = params.alpha
    combined: dict[str, float] = {}
    for term in sorted(set(original.weights) | set(rm)):
        weight = alpha * original.weights.get(term, 0.0) + (1 - alpha) * rm.get(term, 0.0)
        if weight > 0:
            combined[term] = weight
    if not combined:
        log.warning("relevance model empty at alpha=%s for query %r; "
                    "returning original query", alpha, query)
        return original
    total = sum(combined.values())
    return WeightedQuery({t: w / total for t, w in combined.items()})


def search_weighted(index: InvertedIndex, weighted: WeightedQuery,
                    scorer: str = "bm25", params=None, k: int = 1000,
                    exhaustive: bool = False) -> list[ScoredDoc]:
    """Rank the top-k documents for a weighted query.

    Each term's contribution is multiplied by its weight. Weights are
    renormalized to sum to 1 first, so any positive rescaling of the input
    leaves the ranking unchanged; ties break by ascending doc id as in
    ``search``.
    """
    if not weighted.weights:
        raise ValueError("weighted query has no terms")
    if any(w <= 0 for w in weighted.weights.values()):
        raise ValueError("weights must be strictly positive")
    total = sum(weighted.weights.values())
    pairs = [(t, w / total) for t, w in weighted.items()]
    return _search_prepared(index, pairs, scorer, params, k, exhaustive)


def search_rm3(index: InvertedIndex, query: str, scorer: str = "bm25",
               params=None, k: int = 1000, rm3: RM3Params = RM3Params(),
               config: AnalyzerConfig = DEFAULT_CONFIG,
               feedback_index: InvertedIndex | None = None) -> list[ScoredDoc]:
    """Two-pass retrieval: first pass, RM3 expansion, weighted second pass."""
    first = search(index, query, scorer, params, max(k, rm3.fb_docs), config)
    if not first:
        return []
    expanded = rm3_expand(index, query, first, rm3, config, feedback_index)
    return search_weighted(index, expanded, scorer, params, k)
