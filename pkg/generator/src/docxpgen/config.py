from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class GenerationConfig:
    """Settings for batch expansion generation.

    ``model`` selects the backend:
      - "extractive"        deterministic heuristic generator (no weights)
      - "artifact:<dir>"    a model directory produced by finetune
      - "hf:<name-or-path>" any transformers Seq2Seq checkpoint
    """

    model: str = "extractive"
    samples_per_passage: int = 1
    max_input_tokens: int = 64
    max_output_tokens: int = 16
    greedy: bool = True
    seed: int = 1
    batch_size: int = 16

    def __post_init__(self):
        if self.samples_per_passage < 1:
            raise ValueError(f"samples_per_passage must be >= 1, got {self.samples_per_passage}")
        if self.max_input_tokens < 1:
            raise ValueError(f"max_input_tokens must be >= 1, got {self.max_input_tokens}")
        if self.max_output_tokens < 1:
            raise ValueError(f"max_output_tokens must be >= 1, got {self.max_output_tokens}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
