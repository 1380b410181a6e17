"""Fine-tuning on weak-supervision pairs.

The trainer consumes the engine's pairs jsonl unchanged (pre-flight
schema validation happens before any training state is built) and writes
a model artifact directory that ``generate --model artifact:<dir>``
loads. Metrics are logged per epoch; the returned summary carries the
final loss.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import torch
from torch import nn

from .schemas import read_pairs, validate_pairs
from .seq2seq import (BOS, PAD, Seq2Seq, Vocab, pad_batch, save_artifact)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainSettings:
    epochs: int = 5
    batch_size: int = 8
    lr: float = 1e-2
    embed_dim: int = 64
    hidden_dim: int = 128
    max_input_tokens: int = 64
    max_output_tokens: int = 24
    vocab_size: int = 8000
    seed: int = 13

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")


@dataclass
class TrainSummary:
    pairs: int
    epochs: int
    final_loss: float
    artifact_dir: str


def finetune(pairs_path: str | Path, out_dir: str | Path,
             settings: TrainSettings = TrainSettings()) -> TrainSummary:
    """Train the word-level encoder-decoder on (passage -> query) pairs."""
    n_pairs = validate_pairs(pairs_path)  # pre-flight: fails before training starts
    pairs = list(read_pairs(pairs_path))

    torch.manual_seed(settings.seed)
    vocab = Vocab.build([p.passage for p in pairs] + [p.query for p in pairs],
                        settings.vocab_size)
    sources = [vocab.encode(p.passage, settings.max_input_tokens) for p in pairs]
    targets = [vocab.encode(p.query, settings.max_output_tokens) for p in pairs]

    model = Seq2Seq(len(vocab), settings.embed_dim, settings.hidden_dim)
    optimizer = torch.optim.Adam(model.parameters(), lr=settings.lr)
    criterion = nn.CrossEntropyLoss(ignore_index=PAD)

    model.train()
    final_loss = float("inf")
    order = list(range(n_pairs))
    for epoch in range(settings.epochs):
        epoch_loss = 0.0
        batches = 0
        for start in range(0, n_pairs, settings.batch_size):
            batch = order[start:start + settings.batch_size]
            src = pad_batch([sources[i] for i in batch])
            tgt = pad_batch([targets[i] for i in batch])
            tgt_in = torch.cat([torch.full((tgt.shape[0], 1), BOS, dtype=torch.long),
                                tgt[:, :-1]], dim=1)
            logits = model(src, tgt_in)
            loss = criterion(logits.reshape(-1, len(vocab)), tgt.reshape(-1))
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            epoch_loss += float(loss.detach())
            batches += 1
        final_loss = epoch_loss / batches
        log.info("epoch %d/%d: loss %.4f", epoch + 1, settings.epochs, final_loss)

    if not torch.isfinite(torch.tensor(final_loss)):
        raise RuntimeError(f"training diverged: loss {final_loss}")

    model.eval()
    save_artifact(model, vocab, out_dir, {
        "embed_dim": settings.embed_dim,
        "hidden_dim": settings.hidden_dim,
        "max_input_tokens": settings.max_input_tokens,
        "max_output_tokens": settings.max_output_tokens,
        "pairs": n_pairs,
        "epochs": settings.epochs,
        "final_loss": final_loss,
    })
    log.info("saved model artifact (%d pairs, vocab %d) -> %s",
             n_pairs, len(vocab), out_dir)
    return TrainSummary(n_pairs, settings.epochs, final_loss, str(out_dir))
