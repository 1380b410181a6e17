"""Generation backends behind one text-in/text-out interface.

A backend turns a batch of passage texts into ``samples_per_passage``
query strings each. Strings are always non-empty (the engine rejects
empty expansion strings).
"""

from __future__ import annotations

import re
from collections import Counter
from typing import Protocol

from .config import GenerationConfig
from .seq2seq import load_artifact, pad_batch, tokenize

_FALLBACK = "what is this passage about"

# words that make poor question anchors
_GLUE = frozenset("""
a an and are as at be but by for from has have in is it its of on or that
the this to was were will with
""".split())


class Generator(Protocol):
    def generate_batch(self, texts: list[str], config: GenerationConfig) -> list[list[str]]:
        ...


def resolve(config: GenerationConfig) -> Generator:
    model = config.model
    if model == "extractive":
        return ExtractiveGenerator()
    if model.startswith("artifact:"):
        return ArtifactGenerator(model.split(":", 1)[1])
    if model.startswith("hf:"):
        return HFGenerator(model.split(":", 1)[1])
    raise ValueError(f"unknown model {model!r} (expected 'extractive', "
                     f"'artifact:<dir>' or 'hf:<name-or-path>')")


class ExtractiveGenerator:
    """Deterministic template generator over the passage's salient terms.

    No weights, no randomness: sample i anchors on the i-th most frequent
    content words, so distinct samples stay distinct while remaining
    reproducible everywhere.
    """

    _TEMPLATES = (
        "what is {0} {1}",
        "how does {0} relate to {1}",
        "why is {0} important",
        "define {0} and {1}",
        "where is {0} found",
    )

    def generate_batch(self, texts: list[str], config: GenerationConfig) -> list[list[str]]:
        return [self._for_passage(text, config.samples_per_passage) for text in texts]

    def _for_passage(self, text: str, n: int) -> list[str]:
        words = [t for t in tokenize(text) if t not in _GLUE]
        if not words:
            return [_FALLBACK] * n
        ranked = [t for t, _ in Counter(words).most_common()]
        out = []
        for i in range(n):
            a = ranked[(2 * i) % len(ranked)]
            b = ranked[(2 * i + 1) % len(ranked)]
            out.append(self._TEMPLATES[i % len(self._TEMPLATES)].format(a, b))
        return out


class ArtifactGenerator:
    """Runs a model directory produced by finetune."""

    def __init__(self, path: str):
        self.model, self.vocab, self.meta = load_artifact(path)

    def generate_batch(self, texts: list[str], config: GenerationConfig) -> list[list[str]]:
        import torch

        src = pad_batch([self.vocab.encode(t, config.max_input_tokens) for t in texts])
        generator = None
        if not config.greedy:
            generator = torch.Generator().manual_seed(config.seed)
        out: list[list[str]] = [[] for _ in texts]
        for _ in range(config.samples_per_passage):
            ids = self.model.generate(src, config.max_output_tokens,
                                      config.greedy, generator)
            for i, seq in enumerate(ids):
                out[i].append(self.vocab.decode(seq) or _FALLBACK)
        return out


class HFGenerator:
    """Wraps any transformers Seq2Seq checkpoint (local path or hub name)."""

    def __init__(self, name_or_path: str):
        try:
            from transformers import AutoModelForSeq2SeqLM, AutoTokenizer
        except ImportError as exc:
            raise RuntimeError("hf: models need the 'transformers' extra "
                               "(pip install docxp-generator[hf])") from exc
        self.tokenizer = AutoTokenizer.from_pretrained(name_or_path)
        self.model = AutoModelForSeq2SeqLM.from_pretrained(name_or_path)
        self.model.eval()

    def generate_batch(self, texts: list[str], config: GenerationConfig) -> list[list[str]]:
        import torch

        torch.manual_seed(config.seed)
        encoded = self.tokenizer(texts, truncation=True,
                                 max_length=config.max_input_tokens,
                                 padding=True, return_tensors="pt")
        with torch.no_grad():
            generated = self.model.generate(
                **encoded,
                max_new_tokens=config.max_output_tokens,
                do_sample=not config.greedy,
                num_return_sequences=config.samples_per_passage,
                num_beams=1,
            )
        decoded = self.tokenizer.batch_decode(generated, skip_special_tokens=True)
        n = config.samples_per_passage
        return [[_clean(s) for s in decoded[i * n:(i + 1) * n]]
                for i in range(len(texts))]


def _clean(text: str) -> str:
    text = re.sub(r"\s+", " ", text).strip()
    return text or _FALLBACK
