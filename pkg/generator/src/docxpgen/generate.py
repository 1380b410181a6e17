"""Batch expansion generation: passages jsonl in, expansions jsonl out.

One output record per input record, ids copied verbatim, exactly
``samples_per_passage`` strings per record. Passages longer than
``max_input_tokens`` are truncated; the count is reported at the end.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO

from .backends import resolve
from .config import GenerationConfig
from .schemas import read_passages, write_expansions
from .seq2seq import tokenize

log = logging.getLogger(__name__)


@dataclass
class GenerationStats:
    passages: int = 0
    truncated: int = 0


def generate_file(passages_path: str | Path, out: TextIO,
                  config: GenerationConfig = GenerationConfig()) -> GenerationStats:
    backend = resolve(config)
    stats = GenerationStats()

    def rows():
        batch_ids: list[str] = []
        batch_texts: list[str] = []

        def flush():
            for passage_id, queries in zip(batch_ids,
                                           backend.generate_batch(batch_texts, config)):
                assert len(queries) == config.samples_per_passage
                yield passage_id, queries
            batch_ids.clear()
            batch_texts.clear()

        for passage in read_passages(passages_path):
            stats.passages += 1
            text = passage.contents
            tokens = tokenize(text)
            if len(tokens) > config.max_input_tokens:
                stats.truncated += 1
                text = " ".join(tokens[:config.max_input_tokens])
            batch_ids.append(passage.id)
            batch_texts.append(text)
            if len(batch_ids) >= config.batch_size:
                yield from flush()
        if batch_ids:
            yield from flush()

    write_expansions(rows(), out)
    log.info("generated expansions for %d passages (%d truncated to %d tokens)",
             stats.passages, stats.truncated, config.max_input_tokens)
    return stats
