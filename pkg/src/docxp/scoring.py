"""Relevance scorers: BM25, query likelihood with Dirichlet smoothing (QLD),
and query likelihood with Jelinek-Mercer smoothing (QLJM).

Formulas (sums run over query term occurrences; c(t,q) is the term's count
in the query, c(t,d) its tf in the document, |d| the document length):

    BM25:  sum  idf(t) * c(t,q) * tf / (tf + k1*(1 - b + b*|d|/avgdl))
           idf(t) = ln(1 + (N - df + 0.5)/(df + 0.5))
    QLD:   sum over t with cf(t) > 0 of
           c(t,q) * ln( (c(t,d) + mu*cf(t)/total) / (|d| + mu) )
    QLJM:  sum over t with cf(t) > 0 of
           c(t,q) * ln( (1-lambda)*c(t,d)/|d| + lambda*cf(t)/total )
           with c(t,d)/|d| taken as 0 for an empty document

QL scores are log-likelihoods. Query terms unseen in the whole collection
(cf = 0) are skipped, so every score is finite.

Scorers come in two forms: direct per-document functions, and prepared
closures (``make_scorer``) that the search loop calls once per candidate
with the document's tf map and length.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .index import InvertedIndex

SCORERS = ("bm25", "qld", "qljm")

# a prepared scorer maps (term -> tf in doc, doc length) to a score
DocScorer = Callable[[Mapping[str, int], int], float]


@dataclass(frozen=True)
class BM25Params:
    k1: float = 0.9
    b: float = 0.4

    def __post_init__(self):
        if self.k1 < 0:
            raise ValueError(f"k1 must be >= 0, got {self.k1}")
        if not 0 <= self.b <= 1:
            raise ValueError(f"b must be in [0, 1], got {self.b}")


@dataclass(frozen=True)
class DirichletParams:
    mu: float = 1000.0

    def __post_init__(self):
        if self.mu <= 0:
            raise ValueError(f"mu must be > 0, got {self.mu}")


@dataclass(frozen=True)
class JMParams:
    lam: float = 0.1

    def __post_init__(self):
        if not 0 < self.lam < 1:
            raise ValueError(f"lambda must be in (0, 1), got {self.lam}")


def bm25_idf(index: InvertedIndex, term: str) -> float:
    df = index.df(term)
    return math.log(1.0 + (index.n_docs - df + 0.5) / (df + 0.5))


def make_scorer(name: str, index: InvertedIndex,
                weighted_terms: Sequence[tuple[str, float]],
                params: BM25Params | DirichletParams | JMParams | None = None) -> DocScorer:
    """Prepare a per-document scorer for a weighted term list.

    ``weighted_terms`` carries one entry per unique term with its
    multiplier: c(t,q) for a plain query, the RM3 weight for an expanded
    one. Contributions are accumulated in the given term order.
    """
    if name == "bm25":
        p = params or BM25Params()
        if not isinstance(p, BM25Params):
            raise TypeError("bm25 scorer requires BM25Params")
        prepared = [(t, w, bm25_idf(index, t)) for t, w in weighted_terms]
        k1, b, avgdl = p.k1, p.b, index.avgdl

        def bm25(tfs: Mapping[str, int], dl: int) -> float:
            norm = k1 * (1.0 - b + (b * dl / avgdl if avgdl > 0 else 0.0))
            score = 0.0
            for term, weight, idf in prepared:
                tf = tfs.get(term, 0)
                if tf:
                    score += weight * idf * tf / (tf + norm)
            return score

        return bm25

    if name == "qld":
        p = params or DirichletParams()
        if not isinstance(p, DirichletParams):
            raise TypeError("qld scorer requires DirichletParams")
        _require_nonempty_collection(index)
        mu, total = p.mu, index.total_terms
        prepared = [(t, w, index.cf.get(t, 0)) for t, w in weighted_terms]

        def qld(tfs: Mapping[str, int], dl: int) -> float:
            score = 0.0
            for term, weight, cf in prepared:
                if cf == 0:
                    continue
                score += weight * math.log((tfs.get(term, 0) + mu * cf / total) / (dl + mu))
            return score

        return qld

    if name == "qljm":
        p = params or JMParams()
        if not isinstance(p, JMParams):
            raise TypeError("qljm scorer requires JMParams")
        _require_nonempty_collection(index)
        lam, total = p.lam, index.total_terms
        prepared = [(t, w, index.cf.get(t, 0)) for t, w in weighted_terms]

        def qljm(tfs: Mapping[str, int], dl: int) -> float:
            score = 0.0
            for term, weight, cf in prepared:
                if cf == 0:
                    continue
                doc_part = (tfs.get(term, 0) / dl) if dl > 0 else 0.0
                score += weight * math.log((1.0 - lam) * doc_part + lam * cf / total)
            return score

        return qljm

    raise ValueError(f"unknown scorer {name!r} (expected one of {SCORERS})")


def _require_nonempty_collection(index: InvertedIndex) -> None:
    if index.total_terms <= 0:
        raise ValueError("query-likelihood scoring requires a collection with at least one token")


def _doc_tfs(index: InvertedIndex, terms: Sequence[str], ordinal: int) -> dict[str, int]:
    return {t: index.tf(t, ordinal) for t in set(terms)}


def _counted(terms: Sequence[str]) -> list[tuple[str, float]]:
    counts = Counter(terms)
    return [(t, float(c)) for t, c in counts.items()]


def bm25_score(index: InvertedIndex, terms: Sequence[str], ordinal: int,
               params: BM25Params = BM25Params()) -> float:
    """BM25 score of one document for a query term sequence."""
    scorer = make_scorer("bm25", index, _counted(terms), params)
    return scorer(_doc_tfs(index, terms, ordinal), index.doc_lengths[ordinal])


def qld_score(index: InvertedIndex, terms: Sequence[str], ordinal: int,
              params: DirichletParams = DirichletParams()) -> float:
    """Dirichlet-smoothed query log-likelihood of one document."""
    scorer = make_scorer("qld", index, _counted(terms), params)
    return scorer(_doc_tfs(index, terms, ordinal), index.doc_lengths[ordinal])


def qljm_score(index: InvertedIndex, terms: Sequence[str], ordinal: int,
               params: JMParams = JMParams()) -> float:
    """Jelinek-Mercer-smoothed query log-likelihood of one document."""
    scorer = make_scorer("qljm", index, _counted(terms), params)
    return scorer(_doc_tfs(index, terms, ordinal), index.doc_lengths[ordinal])


def default_params(name: str) -> BM25Params | DirichletParams | JMParams:
    if name == "bm25":
        return BM25Params()
    if name == "qld":
        return DirichletParams()
    if name == "qljm":
        return JMParams()
    raise ValueError(f"unknown scorer {name!r} (expected one of {SCORERS})")
