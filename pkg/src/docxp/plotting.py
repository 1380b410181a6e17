"""Figure rendering for the report subcommands.

Every figure is written to a file next to its delimited twin (the TSV or
jsonl carrying the same numbers), so plots are reproducible from the data
without rerunning the pipeline.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def plot_histogram(buckets: list[tuple[int, int]], bucket_width: int,
                   path: str | Path, title: str, xlabel: str) -> None:
    """Bar chart of a sparse (bucket index, count) histogram."""
    fig, ax = plt.subplots(figsize=(6, 4))
    if buckets:
        xs = [b * bucket_width for b, _ in buckets]
        ys = [c for _, c in buckets]
        ax.bar(xs, ys, width=bucket_width * 0.9, align="edge", color="#4878a8")
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("document count")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_passage_distribution(counts: list[tuple[int, int]], not_found: int,
                              path: str | Path) -> None:
    """Bar chart of relevant-passage window indices; not-found drawn apart."""
    fig, ax = plt.subplots(figsize=(6, 4))
    if counts:
        ax.bar([i for i, _ in counts], [c for _, c in counts],
               color="#4878a8", label="located")
    if not_found:
        edge = (max(i for i, _ in counts) + 1) if counts else 0
        ax.bar([edge], [not_found], color="#b04848", label="not found")
    ax.set_title("relevant passage position")
    ax.set_xlabel("window index")
    ax.set_ylabel("passage count")
    if not_found:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_per_query_metric(per_query: dict[str, dict[str, float]], metric: str,
                          path: str | Path) -> None:
    """Per-query bar chart for one metric of an evaluation report."""
    fig, ax = plt.subplots(figsize=(max(6, 0.3 * len(per_query)), 4))
    qids = list(per_query)
    ax.bar(range(len(qids)), [per_query[q][metric] for q in qids], color="#4878a8")
    ax.set_xticks(range(len(qids)))
    ax.set_xticklabels(qids, rotation=90, fontsize=7)
    ax.set_ylim(0, 1)
    ax.set_title(f"per-query {metric}")
    ax.set_ylabel(metric)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
