"""Independent reference implementations the engine is checked against.

Everything here works directly on raw token lists with plain loops; no
index structure, no shared scoring code, no heaps. Deliberately slow.
"""

from __future__ import annotations

import math
from collections import Counter


def collection_stats(docs: list[list[str]]):
    """(N, doc lengths, df map, cf map, total tokens, avgdl) by brute force."""
    n = len(docs)
    lengths = [len(d) for d in docs]
    df: Counter = Counter()
    cf: Counter = Counter()
    for tokens in docs:
        for term in set(tokens):
            df[term] += 1
        for term in tokens:
            cf[term] += 1
    total = sum(lengths)
    avgdl = total / n if n else 0.0
    return n, lengths, df, cf, total, avgdl


def bm25(docs: list[list[str]], query: list[str], doc_idx: int,
         k1: float = 0.9, b: float = 0.4) -> float:
    n, lengths, df, _, _, avgdl = collection_stats(docs)
    tokens = docs[doc_idx]
    score = 0.0
    for term in query:  # one summand per query term occurrence
        tf = tokens.count(term)
        if tf == 0:
            continue
        idf = math.log(1.0 + (n - df[term] + 0.5) / (df[term] + 0.5))
        norm = 1.0 - b + (b * lengths[doc_idx] / avgdl if avgdl > 0 else 0.0)
        score += idf * tf / (tf + k1 * norm)
    return score


def qld(docs: list[list[str]], query: list[str], doc_idx: int,
        mu: float = 1000.0) -> float:
    _, lengths, _, cf, total, _ = collection_stats(docs)
    tokens = docs[doc_idx]
    score = 0.0
    for term in query:
        if cf[term] == 0:
            continue
        tf = tokens.count(term)
        score += math.log((tf + mu * cf[term] / total) / (lengths[doc_idx] + mu))
    return score


def qljm(docs: list[list[str]], query: list[str], doc_idx: int,
         lam: float = 0.1) -> float:
    _, lengths, _, cf, total, _ = collection_stats(docs)
    tokens = docs[doc_idx]
    score = 0.0
    for term in query:
        if cf[term] == 0:
            continue
        dl = lengths[doc_idx]
        doc_part = tokens.count(term) / dl if dl > 0 else 0.0
        score += math.log((1.0 - lam) * doc_part + lam * cf[term] / total)
    return score


def score(scorer: str, docs, query, doc_idx, **kw) -> float:
    return {"bm25": bm25, "qld": qld, "qljm": qljm}[scorer](docs, query, doc_idx, **kw)


def rank(docs: list[list[str]], doc_ids: list[str], query: list[str],
         scorer: str, k1: float = 0.9, b: float = 0.4, mu: float = 1000.0,
         lam: float = 0.1) -> list[tuple[str, float]]:
    """All candidate docs (sharing a term with the query) sorted by
    (score desc, doc id asc); zero scores dropped for bm25.

    Stats are computed once per call; the per-document formulas are still
    spelled out inline.
    """
    n, lengths, df, cf, total, avgdl = collection_stats(docs)
    rows = []
    for idx, tokens in enumerate(docs):
        if not any(t in tokens for t in query):
            continue
        counts = Counter(tokens)
        s = 0.0
        for term in query:
            tf = counts.get(term, 0)
            if scorer == "bm25":
                if tf == 0:
                    continue
                idf = math.log(1.0 + (n - df[term] + 0.5) / (df[term] + 0.5))
                norm = 1.0 - b + (b * lengths[idx] / avgdl if avgdl > 0 else 0.0)
                s += idf * tf / (tf + k1 * norm)
            elif scorer == "qld":
                if cf[term] == 0:
                    continue
                s += math.log((tf + mu * cf[term] / total) / (lengths[idx] + mu))
            else:
                if cf[term] == 0:
                    continue
                doc_part = tf / lengths[idx] if lengths[idx] > 0 else 0.0
                s += math.log((1.0 - lam) * doc_part + lam * cf[term] / total)
        if scorer == "bm25" and s == 0.0:
            continue
        rows.append((doc_ids[idx], s))
    return sorted(rows, key=lambda r: (-r[1], r[0]))


def rm3_weights(docs: list[list[str]], fb_indices: list[int], fb_scores: list[float],
                query: list[str], fb_terms: int, alpha: float,
                eps: float = 1e-6, exclude_df_equals_n: bool = True) -> dict[str, float]:
    """Step-by-step RM3 expansion over raw feedback docs."""
    n, _, df, _, _, _ = collection_stats(docs)
    min_s = min(fb_scores)
    shifted = [s - min_s + eps for s in fb_scores]
    w_docs = [s / sum(shifted) for s in shifted]

    rm: dict[str, float] = {}
    for idx, w_d in zip(fb_indices, w_docs):
        tokens = docs[idx]
        if not tokens:
            continue
        for term, tf in Counter(tokens).items():
            if exclude_df_equals_n and df[term] == n:
                continue
            rm[term] = rm.get(term, 0.0) + w_d * tf / len(tokens)

    kept = sorted(rm.items(), key=lambda kv: (-kv[1], kv[0]))[:fb_terms]
    z = sum(w for _, w in kept)
    rm = {t: w / z for t, w in kept} if z > 0 else {}

    qcounts = Counter(query)
    qtotal = sum(qcounts.values())
    pq = {t: c / qtotal for t, c in qcounts.items()}

    combined = {}
    for term in set(pq) | set(rm):
        w = alpha * pq.get(term, 0.0) + (1.0 - alpha) * rm.get(term, 0.0)
        if w > 0:
            combined[term] = w
    z = sum(combined.values())
    return {t: w / z for t, w in combined.items()}


def average_precision(ranking: list[str], relevant: set[str],
                      cutoff: int = 1000) -> float:
    """AP by recomputing precision@i from scratch at every relevant rank."""
    total = 0.0
    for i in range(1, min(len(ranking), cutoff) + 1):
        if ranking[i - 1] in relevant:
            prefix = ranking[:i]
            total += sum(1 for d in prefix if d in relevant) / i
    return total / len(relevant)


def evaluate(run: dict[str, list[str]], qrels: dict[str, dict[str, int]]):
    """Per-query metric rows plus means, from first principles."""
    per_query = {}
    for qid, judgments in qrels.items():
        relevant = {d for d, g in judgments.items() if g > 0}
        if not relevant:
            continue
        ranking = run.get(qid, [])
        row = {"map": average_precision(ranking, relevant)}
        for k, name in ((100, "r@100"), (10, "r@10")):
            row[name] = len([d for d in ranking[:k] if d in relevant]) / len(relevant)
        for k, name in ((10, "p@10"), (5, "p@5")):
            row[name] = len([d for d in ranking[:k] if d in relevant]) / k
        per_query[qid] = row
    means = {}
    for metric in ("map", "r@100", "r@10", "p@10", "p@5"):
        vals = [row[metric] for row in per_query.values()]
        means[metric] = sum(vals) / len(vals) if vals else 0.0
    return per_query, means
