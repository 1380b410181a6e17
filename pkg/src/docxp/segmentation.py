"""Long-document strategies deciding which text the expansion generator sees.

Three strategies:
- concat: sliding sentence-aligned windows (~target_tokens each, overlapping
  by roughly half), expansion runs per window, results are folded back per doc
- first_k: the head window of the first k whole sentences
- pi: one window picked by an unsupervised passage-importance predictor
  (tf-idf cosine between window and full document)

Windows snap to whole sentences: a window is the shortest run of
consecutive sentences holding at least target_tokens tokens, so windows
may overshoot by the final sentence's spillover.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .analysis import AnalyzerConfig, DEFAULT_CONFIG, Sentence, split_sentences, terms as analyze_terms
from .corpus import Document
from .index import InvertedIndex

STRATEGIES = ("concat", "first_k", "pi")

DEFAULT_WINDOW_TOKENS = 60
DEFAULT_STRIDE_TOKENS = 30
DEFAULT_FIRST_K = 5


@dataclass(frozen=True)
class PassageWindow:
    doc_id: str
    window_index: int
    first_sentence: int
    last_sentence: int  # inclusive
    token_count: int
    text: str


@dataclass(frozen=True)
class PassageSelection:
    doc_id: str
    strategy: str
    windows: list[PassageWindow]


def _window(doc_id: str, idx: int, sentences: list[Sentence],
            first: int, last: int) -> PassageWindow:
    chosen = sentences[first:last + 1]
    return PassageWindow(
        doc_id=doc_id,
        window_index=idx,
        first_sentence=first,
        last_sentence=last,
        token_count=sum(s.token_count for s in chosen),
        text=" ".join(s.text for s in chosen),
    )


def segment_concat(doc: Document, target_tokens: int = DEFAULT_WINDOW_TOKENS,
                   stride_tokens: int = DEFAULT_STRIDE_TOKENS,
                   config: AnalyzerConfig = DEFAULT_CONFIG) -> list[PassageWindow]:
    """Overlapping sentence-aligned windows covering the whole document.

    Each window is the shortest run of consecutive sentences with at least
    ``target_tokens`` tokens (or the document tail). The next window starts
    at the first sentence beginning at least ``stride_tokens`` tokens after
    the current window's start. An empty document yields no windows.
    """
    if target_tokens < 1:
        raise ValueError(f"target_tokens must be >= 1, got {target_tokens}")
    if not 1 <= stride_tokens <= target_tokens:
        raise ValueError(f"stride_tokens must be in [1, target_tokens], got {stride_tokens}")
    sentences = split_sentences(doc.text, config)
    if not sentences:
        return []

    windows: list[PassageWindow] = []
    first = 0
    while True:
        last = first
        count = sentences[last].token_count
        while count < target_tokens and last + 1 < len(sentences):
            last += 1
            count += sentences[last].token_count
        windows.append(_window(doc.id, len(windows), sentences, first, last))
        if last == len(sentences) - 1:
            return windows
        # stride <= target ensures this lands at or before sentence last+1,
        # so no sentence is ever skipped
        threshold = sentences[first].start + stride_tokens
        nxt = first + 1
        while sentences[nxt].start < threshold:
            nxt += 1
        first = nxt


def segment_first_k(doc: Document, k_sentences: int = DEFAULT_FIRST_K,
                    config: AnalyzerConfig = DEFAULT_CONFIG) -> PassageWindow:
    """Head window of the first min(k, #sentences) whole sentences."""
    if k_sentences < 1:
        raise ValueError(f"k_sentences must be >= 1, got {k_sentences}")
    sentences = split_sentences(doc.text, config)
    if not sentences:
        raise ValueError(f"document {doc.id!r} has no sentences to expand")
    last = min(k_sentences, len(sentences)) - 1
    return _window(doc.id, 0, sentences, 0, last)


def homogeneity_score(window: PassageWindow, doc: Document,
                      stats: InvertedIndex | None = None,
                      config: AnalyzerConfig = DEFAULT_CONFIG) -> float:
    """Cosine similarity between the tf-idf vectors of window and document.

    idf(t) = ln(1 + N/df(t)) from ``stats``; without stats all terms weigh
    equally (idf = 1). Returns 0 for a window that analyzes to nothing.
    """
    win_tf = Counter(analyze_terms(window.text, config))
    doc_tf = Counter(analyze_terms(doc.text, config))
    if not win_tf or not doc_tf:
        return 0.0

    def idf(term: str) -> float:
        if stats is None:
            return 1.0
        return math.log(1.0 + stats.n_docs / max(stats.df(term), 1))

    dot = 0.0
    win_norm = 0.0
    for term, tf in win_tf.items():
        w = tf * idf(term)
        win_norm += w * w
        dot += w * doc_tf.get(term, 0) * idf(term)
    doc_norm = sum((tf * idf(term)) ** 2 for term, tf in doc_tf.items())
    if win_norm == 0.0 or doc_norm == 0.0:
        return 0.0
    return min(1.0, dot / math.sqrt(win_norm * doc_norm))


def select_passage_pi(doc: Document, target_tokens: int = DEFAULT_WINDOW_TOKENS,
                      stats: InvertedIndex | None = None,
                      config: AnalyzerConfig = DEFAULT_CONFIG) -> PassageWindow:
    """Candidate windows from segment_concat; pick the one most similar to
    the whole document, earliest window on ties."""
    windows = segment_concat(doc, target_tokens, max(1, target_tokens // 2), config)
    if not windows:
        raise ValueError(f"document {doc.id!r} has no sentences to expand")
    best = windows[0]
    best_score = homogeneity_score(best, doc, stats, config)
    for window in windows[1:]:
        score = homogeneity_score(window, doc, stats, config)
        if score > best_score:
            best, best_score = window, score
    return best


def select(doc: Document, strategy: str, target_tokens: int = DEFAULT_WINDOW_TOKENS,
           stride_tokens: int = DEFAULT_STRIDE_TOKENS, k_sentences: int = DEFAULT_FIRST_K,
           stats: InvertedIndex | None = None,
           config: AnalyzerConfig = DEFAULT_CONFIG) -> PassageSelection:
    """Apply one strategy to a document; concat keeps all windows, the
    others exactly one."""
    if strategy == "concat":
        windows = segment_concat(doc, target_tokens, stride_tokens, config)
    elif strategy == "first_k":
        windows = [segment_first_k(doc, k_sentences, config)]
    elif strategy == "pi":
        windows = [select_passage_pi(doc, target_tokens, stats, config)]
    else:
        raise ValueError(f"unknown strategy {strategy!r} (expected one of {STRATEGIES})")
    return PassageSelection(doc.id, strategy, windows)


def passage_position(doc: Document, passage_text: str,
                     config: AnalyzerConfig = DEFAULT_CONFIG) -> int | None:
    """Index of the first default-concat window containing the passage.

    Containment means the passage's analyzed token sequence appears as a
    contiguous subsequence of the window's. Returns None when no window
    contains it (or the passage analyzes to nothing).
    """
    needle = analyze_terms(passage_text, config)
    if not needle:
        return None
    for window in segment_concat(doc, config=config):
        hay = analyze_terms(window.text, config)
        if _contains(hay, needle):
            return window.window_index
    return None


def _contains(hay: list[str], needle: list[str]) -> bool:
    n = len(needle)
    return any(hay[i:i + n] == needle for i in range(len(hay) - n + 1))
