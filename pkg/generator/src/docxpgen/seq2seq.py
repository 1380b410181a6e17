"""A small word-level encoder-decoder trained from scratch on (passage,
query) pairs.

This is the offline-friendly model behind ``finetune``: a GRU
encoder-decoder over a vocabulary built from the training file. It is a
smoke-scale stand-in with the same text-in/text-out surface as a large
pretrained checkpoint, not a quality target.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

import torch
from torch import nn

PAD, BOS, EOS, UNK = 0, 1, 2, 3
SPECIALS = ["<pad>", "<bos>", "<eos>", "<unk>"]

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


class Vocab:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.index = {t: i for i, t in enumerate(tokens)}

    @classmethod
    def build(cls, texts: list[str], max_size: int = 8000) -> "Vocab":
        from collections import Counter
        counts = Counter(t for text in texts for t in tokenize(text))
        keep = [t for t, _ in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))]
        return cls(SPECIALS + keep[: max_size - len(SPECIALS)])

    def encode(self, text: str, limit: int) -> list[int]:
        ids = [self.index.get(t, UNK) for t in tokenize(text)[:limit]]
        return ids + [EOS]

    def decode(self, ids: list[int]) -> str:
        words = [self.tokens[i] for i in ids if i > UNK]
        return " ".join(words)

    def __len__(self) -> int:
        return len(self.tokens)


class Seq2Seq(nn.Module):
    def __init__(self, vocab_size: int, embed_dim: int = 64, hidden_dim: int = 128):
        super().__init__()
        self.embed = nn.Embedding(vocab_size, embed_dim, padding_idx=PAD)
        self.encoder = nn.GRU(embed_dim, hidden_dim, batch_first=True)
        self.decoder = nn.GRU(embed_dim, hidden_dim, batch_first=True)
        self.project = nn.Linear(hidden_dim, vocab_size)

    def encode(self, src: torch.Tensor) -> torch.Tensor:
        _, state = self.encoder(self.embed(src))
        return state

    def forward(self, src: torch.Tensor, tgt_in: torch.Tensor) -> torch.Tensor:
        state = self.encode(src)
        out, _ = self.decoder(self.embed(tgt_in), state)
        return self.project(out)

    @torch.no_grad()
    def generate(self, src: torch.Tensor, max_len: int, greedy: bool,
                 generator: torch.Generator | None = None) -> list[list[int]]:
        state = self.encode(src)
        batch = src.shape[0]
        token = torch.full((batch, 1), BOS, dtype=torch.long)
        done = torch.zeros(batch, dtype=torch.bool)
        outputs: list[list[int]] = [[] for _ in range(batch)]
        for _ in range(max_len):
            out, state = self.decoder(self.embed(token), state)
            logits = self.project(out[:, -1])
            logits[:, PAD] = float("-inf")
            if greedy:
                token = logits.argmax(dim=-1, keepdim=True)
            else:
                probs = torch.softmax(logits, dim=-1)
                token = torch.multinomial(probs, 1, generator=generator)
            for i in range(batch):
                if not done[i]:
                    tok = int(token[i, 0])
                    if tok == EOS:
                        done[i] = True
                    else:
                        outputs[i].append(tok)
            if bool(done.all()):
                break
        return outputs


def pad_batch(sequences: list[list[int]]) -> torch.Tensor:
    width = max(len(s) for s in sequences)
    return torch.tensor([s + [PAD] * (width - len(s)) for s in sequences],
                        dtype=torch.long)


def save_artifact(model: Seq2Seq, vocab: Vocab, out_dir: str | Path,
                  meta: dict) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    torch.save(model.state_dict(), out / "weights.pt")
    (out / "vocab.json").write_text(json.dumps(vocab.tokens, ensure_ascii=False),
                                    encoding="utf-8")
    (out / "config.json").write_text(json.dumps(meta, indent=2), encoding="utf-8")


def load_artifact(path: str | Path) -> tuple[Seq2Seq, Vocab, dict]:
    root = Path(path)
    meta = json.loads((root / "config.json").read_text(encoding="utf-8"))
    vocab = Vocab(json.loads((root / "vocab.json").read_text(encoding="utf-8")))
    model = Seq2Seq(len(vocab), meta["embed_dim"], meta["hidden_dim"])
    model.load_state_dict(torch.load(root / "weights.pt", weights_only=True))
    model.eval()
    return model, vocab, meta
