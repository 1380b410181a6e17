from __future__ import annotations

import random

import pytest

from docxp.corpus import Document
from docxp.index import build_index


@pytest.fixture
def toy_docs():
    return [Document("d1", "a b a"), Document("d2", "b c")]


@pytest.fixture
def toy_index(toy_docs):
    return build_index(toy_docs)


def random_corpus(rng: random.Random, max_docs: int = 10, vocab: int = 20,
                  max_len: int = 30, allow_empty: bool = False):
    """Random small corpus as (Documents, token lists) for oracle comparisons."""
    terms = [f"t{i}" for i in range(vocab)]
    n = rng.randint(1, max_docs)
    docs = []
    tokens = []
    for i in range(n):
        length = rng.randint(0 if allow_empty else 1, max_len)
        toks = [rng.choice(terms) for _ in range(length)]
        docs.append(Document(f"d{i:03d}", " ".join(toks)))
        tokens.append(toks)
    if not any(tokens):  # QL needs at least one collection token
        tokens[0] = [rng.choice(terms)]
        docs[0] = Document(docs[0].id, tokens[0][0])
    return docs, tokens


def random_query(rng: random.Random, vocab: int = 20, max_len: int = 4):
    terms = [f"t{i}" for i in range(vocab)]
    return [rng.choice(terms) for _ in range(rng.randint(1, max_len))]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    rows = []
    for outcome in ("passed", "failed", "skipped"):
        for rep in terminalreporter.stats.get(outcome, []):
            if "test_acceptance" in rep.nodeid and rep.when in ("call", "setup"):
                rows.append((rep.nodeid.split("::")[-1], outcome))
    if rows:
        terminalreporter.section("acceptance criteria")
        for name, outcome in rows:
            label = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[outcome]
            terminalreporter.write_line(f"[{label}] {name}")
