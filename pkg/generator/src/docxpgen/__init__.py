"""Expansion generator companion to the docxp retrieval engine."""

__version__ = "0.1.0"

from .config import GenerationConfig
from .finetune import TrainSettings, TrainSummary, finetune
from .generate import GenerationStats, generate_file
from .schemas import Pair, Passage, SchemaError, read_pairs, read_passages, validate_pairs
