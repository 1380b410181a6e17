"""Engine configuration file: INI-style key=value sections, overridden by
CLI flags.

Recognized sections and keys:

    [analyzer]     stopwords = the,a,of   (or stopword_file = path)
    [bm25]         k1 = 0.9   b = 0.4
    [qld]          mu = 1000
    [qljm]         lambda = 0.1
    [rm3]          fb_docs = 10   fb_terms = 10   alpha = 0.5
    [segmentation] window = 60   stride = 30   k_sentences = 5

Parameter invariants are re-validated on load via the owning dataclasses.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

from .analysis import AnalyzerConfig
from .rm3 import RM3Params
from .scoring import BM25Params, DirichletParams, JMParams
from .segmentation import DEFAULT_FIRST_K, DEFAULT_STRIDE_TOKENS, DEFAULT_WINDOW_TOKENS


@dataclass
class EngineConfig:
    analyzer: AnalyzerConfig = field(default_factory=AnalyzerConfig)
    bm25: BM25Params = field(default_factory=BM25Params)
    qld: DirichletParams = field(default_factory=DirichletParams)
    qljm: JMParams = field(default_factory=JMParams)
    rm3: RM3Params = field(default_factory=RM3Params)
    window_tokens: int = DEFAULT_WINDOW_TOKENS
    stride_tokens: int = DEFAULT_STRIDE_TOKENS
    k_sentences: int = DEFAULT_FIRST_K

    def scorer_params(self, scorer: str):
        return {"bm25": self.bm25, "qld": self.qld, "qljm": self.qljm}[scorer]


def load_config(path: str | Path | None) -> EngineConfig:
    """Read an EngineConfig; None yields the defaults."""
    if path is None:
        return EngineConfig()
    parser = configparser.ConfigParser()
    read = parser.read(path, encoding="utf-8")
    if not read:
        raise FileNotFoundError(f"config file {path!r} not found")

    stopwords: frozenset[str] = frozenset()
    if parser.has_section("analyzer"):
        section = parser["analyzer"]
        if "stopword_file" in section:
            words = Path(section["stopword_file"]).read_text(encoding="utf-8").split()
            stopwords = frozenset(words)
        elif "stopwords" in section:
            stopwords = frozenset(w.strip() for w in section["stopwords"].split(",") if w.strip())

    def get(section: str, key: str, cast, default):
        if parser.has_section(section) and key in parser[section]:
            return cast(parser[section][key])
        return default

    seg_window = get("segmentation", "window", int, DEFAULT_WINDOW_TOKENS)
    seg_stride = get("segmentation", "stride", int, DEFAULT_STRIDE_TOKENS)
    if seg_window < 1 or not 1 <= seg_stride <= seg_window:
        raise ValueError(f"segmentation window/stride invalid: {seg_window}/{seg_stride}")

    return EngineConfig(
        analyzer=AnalyzerConfig(stopwords=stopwords),
        bm25=BM25Params(k1=get("bm25", "k1", float, 0.9),
                        b=get("bm25", "b", float, 0.4)),
        qld=DirichletParams(mu=get("qld", "mu", float, 1000.0)),
        qljm=JMParams(lam=get("qljm", "lambda", float, 0.1)),
        rm3=RM3Params(fb_docs=get("rm3", "fb_docs", int, 10),
                      fb_terms=get("rm3", "fb_terms", int, 10),
                      alpha=get("rm3", "alpha", float, 0.5)),
        window_tokens=seg_window,
        stride_tokens=seg_stride,
        k_sentences=get("segmentation", "k_sentences", int, DEFAULT_FIRST_K),
    )
