"""TREC-style effectiveness metrics and corpus analyses.

Metrics: MAP (cutoff 1000), R@100, R@10, P@10, P@5. Relevance is binary
at grade > 0. Mean values run over judged queries (present in the qrels
with at least one relevant document); judged queries missing from the run
score 0, unjudged run queries are ignored.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping, TextIO

from .analysis import AnalyzerConfig, DEFAULT_CONFIG, terms as analyze_terms
from .corpus import Document
from .errors import FormatError
from .search import RunRanking
from .segmentation import passage_position

METRICS = ("map", "r@100", "r@10", "p@10", "p@5")

MAP_CUTOFF = 1000

# qrels: query id -> doc id -> integer grade
Qrels = dict[str, dict[str, int]]


@dataclass
class MetricReport:
    per_query: dict[str, dict[str, float]] = field(default_factory=dict)
    means: dict[str, float] = field(default_factory=dict)
    query_count: int = 0          # queries present in the run
    judged_query_count: int = 0   # queries contributing to the means


def load_qrels(path: str | Path) -> Qrels:
    """Parse 4-column TREC qrels: "qid 0 docid grade", whitespace-separated."""
    qrels: Qrels = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 4:
                raise FormatError("expected 4 whitespace-separated columns",
                                  path=str(path), line=lineno)
            qid, _, doc_id, grade = parts
            try:
                grade_val = int(grade)
            except ValueError:
                raise FormatError(f"grade {grade!r} is not an integer",
                                  path=str(path), line=lineno) from None
            if grade_val < 0:
                raise FormatError(f"negative grade {grade_val}", path=str(path), line=lineno)
            qrels.setdefault(qid, {})[doc_id] = grade_val
    return qrels


def relevant_docs(qrels: Qrels, qid: str) -> set[str]:
    return {d for d, g in qrels.get(qid, {}).items() if g > 0}


def average_precision(ranking: list[str], relevant: set[str],
                      cutoff: int = MAP_CUTOFF) -> float:
    """Mean of precision at each relevant retrieved rank, over |relevant|.

    Undefined for an empty relevant set (such queries are excluded from
    mean metrics upstream).
    """
    if not relevant:
        raise ValueError("average precision is undefined for an empty relevant set")
    hits = 0
    total = 0.0
    for i, doc_id in enumerate(ranking[:cutoff], start=1):
        if doc_id in relevant:
            hits += 1
            total += hits / i
    return total / len(relevant)


def precision_at_k(ranking: list[str], relevant: set[str], k: int) -> float:
    """|relevant in top k| / k; the denominator stays k for short rankings."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return sum(1 for d in ranking[:k] if d in relevant) / k


def recall_at_k(ranking: list[str], relevant: set[str], k: int) -> float:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not relevant:
        raise ValueError("recall is undefined for an empty relevant set")
    return sum(1 for d in ranking[:k] if d in relevant) / len(relevant)


def evaluate(run: RunRanking, qrels: Qrels) -> MetricReport:
    """Score a run against qrels; see module docstring for the conventions."""
    report = MetricReport(query_count=len(run))
    for qid in qrels:
        relevant = relevant_docs(qrels, qid)
        if not relevant:
            continue
        ranking = [hit.doc_id for hit in run.get(qid, [])]
        report.per_query[qid] = {
            "map": average_precision(ranking, relevant),
            "r@100": recall_at_k(ranking, relevant, 100),
            "r@10": recall_at_k(ranking, relevant, 10),
            "p@10": precision_at_k(ranking, relevant, 10),
            "p@5": precision_at_k(ranking, relevant, 5),
        }
    report.judged_query_count = len(report.per_query)
    for metric in METRICS:
        values = [row[metric] for row in report.per_query.values()]
        report.means[metric] = sum(values) / len(values) if values else 0.0
    return report


def doc_length_histogram(docs: Iterable[Document], bucket_width: int,
                         config: AnalyzerConfig = DEFAULT_CONFIG) -> list[tuple[int, int]]:
    """Sparse histogram of analyzer token lengths: (bucket index, count)."""
    if bucket_width < 1:
        raise ValueError(f"bucket_width must be >= 1, got {bucket_width}")
    counts: dict[int, int] = {}
    for doc in docs:
        bucket = len(analyze_terms(doc.text, config)) // bucket_width
        counts[bucket] = counts.get(bucket, 0) + 1
    return sorted(counts.items())


def relevant_passage_distribution(docs: Mapping[str, str],
                                  records: Iterable[tuple[str, str]],
                                  config: AnalyzerConfig = DEFAULT_CONFIG,
                                  ) -> tuple[list[tuple[int, int]], int]:
    """Histogram of which window each relevant passage falls in.

    ``records`` yields (doc_id, passage_text). Returns the sparse
    (window_index, count) histogram plus a separate not-found count
    (passage absent from every window, or unknown doc id).
    """
    counts: dict[int, int] = {}
    not_found = 0
    for doc_id, passage in records:
        text = docs.get(doc_id)
        position = (passage_position(Document(doc_id, text), passage, config)
                    if text is not None else None)
        if position is None:
            not_found += 1
        else:
            counts[position] = counts.get(position, 0) + 1
    return sorted(counts.items()), not_found


def format_report(report: MetricReport) -> str:
    """Aligned text table: one row per query plus the mean row."""
    header = ["qid"] + list(METRICS)
    rows = [[qid] + [f"{row[m]:.4f}" for m in METRICS]
            for qid, row in report.per_query.items()]
    rows.append(["all"] + [f"{report.means[m]:.4f}" for m in METRICS])
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip()
             for r in [header] + rows]
    lines.append(f"queries in run: {report.query_count}  "
                 f"judged: {report.judged_query_count}")
    return "\n".join(lines)


def write_per_query_jsonl(report: MetricReport, out: TextIO) -> None:
    for qid, row in report.per_query.items():
        record = {"qid": qid}
        record.update((m, round(row[m], 6)) for m in METRICS)
        out.write(json.dumps(record) + "\n")


def load_passage_records(path: str | Path) -> Iterator[tuple[str, str]]:
    """Read jsonl records with "doc_id" and "passage" fields."""
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"invalid JSON: {exc.msg}", path=str(path), line=lineno) from exc
            if "doc_id" not in record or "passage" not in record:
                raise FormatError('expected "doc_id" and "passage" fields',
                                  path=str(path), line=lineno)
            yield str(record["doc_id"]), str(record["passage"])
