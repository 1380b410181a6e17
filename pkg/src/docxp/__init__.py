"""Document-expansion retrieval engine.

A self-contained ad-hoc retrieval stack: deterministic analysis, an
in-memory inverted index, BM25/QLD/QLJM scorers, RM3 pseudo-relevance
feedback, passage segmentation for feeding expansion generators,
weak-supervision pair generation, and TREC-style evaluation.
"""

__version__ = "0.1.0"

from .analysis import AnalyzerConfig, Sentence, Token, analyze, split_sentences
from .corpus import (Document, ExpansionSet, QueryRecord, apply_expansions,
                     load_corpus, load_expansions, load_queries, save_expansions)
from .evaluation import (MetricReport, Qrels, average_precision,
                         doc_length_histogram, evaluate, load_qrels,
                         precision_at_k, recall_at_k,
                         relevant_passage_distribution)
from .index import InvertedIndex, Posting, build_index, load_index, save_index
from .rm3 import RM3Params, WeightedQuery, rm3_expand, search_rm3, search_weighted
from .scoring import (BM25Params, DirichletParams, JMParams, bm25_score,
                      qld_score, qljm_score)
from .search import RunRanking, ScoredDoc, run_batch, search, write_run
from .segmentation import (PassageSelection, PassageWindow, homogeneity_score,
                           passage_position, segment_concat, segment_first_k,
                           select_passage_pi)
from .weak import TrainingPair, generate_pairs
