"""Corpus, query, and expansion file I/O.

File contracts (all UTF-8, LF newlines):
- corpus jsonl: one object per line with "id" and "contents"
- trecweb: <DOC> blocks with <DOCNO> and one or more <TEXT> sections
- expansion jsonl: "id" plus "predicted_queries" (array of strings)
- query file: TSV "qid<TAB>query text"

Corpus loaders are generators: they never hold more than the current
document in memory.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, TextIO

from .analysis import AnalyzerConfig, DEFAULT_CONFIG, terms as analyze_terms
from .errors import DuplicateIdError, FormatError

CORPUS_FORMATS = ("jsonl", "trecweb")


@dataclass(frozen=True)
class Document:
    id: str
    text: str


@dataclass(frozen=True)
class QueryRecord:
    id: str
    text: str


@dataclass
class ExpansionSet:
    """Mapping doc id -> ordered list of generated expansion strings."""

    expansions: dict[str, list[str]] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.expansions)

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self.expansions

    def get(self, doc_id: str) -> list[str]:
        return self.expansions.get(doc_id, [])

    def add(self, doc_id: str, strings: Iterable[str]) -> None:
        for s in strings:
            if not s:
                raise ValueError(f"empty expansion string for doc {doc_id!r}")
            self.expansions.setdefault(doc_id, []).append(s)


def load_corpus(path: str | Path, format: str = "jsonl") -> Iterator[Document]:
    """Stream documents from ``path`` in file order.

    Raises FormatError (with line/record context) on malformed records and
    DuplicateIdError on a repeated doc id.
    """
    if format == "jsonl":
        return _load_jsonl(Path(path))
    if format == "trecweb":
        return _load_trecweb(Path(path))
    raise ValueError(f"unknown corpus format {format!r} (expected one of {CORPUS_FORMATS})")


def _load_jsonl(path: Path) -> Iterator[Document]:
    seen: set[str] = set()
    ordinal = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"invalid JSON: {exc.msg}", path=str(path),
                                  line=lineno, ordinal=ordinal) from exc
            if not isinstance(record, dict) or "id" not in record or "contents" not in record:
                raise FormatError('expected object with "id" and "contents"',
                                  path=str(path), line=lineno, ordinal=ordinal)
            doc_id = str(record["id"])
            if not doc_id:
                raise FormatError("empty doc id", path=str(path), line=lineno, ordinal=ordinal)
            if doc_id in seen:
                raise DuplicateIdError(f"duplicate doc id {doc_id!r}",
                                       path=str(path), line=lineno, ordinal=ordinal)
            seen.add(doc_id)
            yield Document(doc_id, str(record["contents"]))
            ordinal += 1


_DOCNO_RE = re.compile(r"<DOCNO>(.*?)</DOCNO>", re.DOTALL)
_TEXT_RE = re.compile(r"<TEXT>(.*?)</TEXT>", re.DOTALL)


def _load_trecweb(path: Path) -> Iterator[Document]:
    seen: set[str] = set()
    ordinal = 0
    block: list[str] | None = None
    block_line = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if stripped.startswith("<DOC>"):
                if block is not None:
                    raise FormatError("nested <DOC>", path=str(path), line=lineno, ordinal=ordinal)
                block = []
                block_line = lineno
                continue
            if stripped.startswith("</DOC>"):
                if block is None:
                    raise FormatError("</DOC> without <DOC>", path=str(path),
                                      line=lineno, ordinal=ordinal)
                yield _parse_doc_block("".join(block), path, block_line, ordinal, seen)
                block = None
                ordinal += 1
                continue
            if block is not None:
                block.append(line)
    if block is not None:
        raise FormatError("unterminated <DOC> block", path=str(path),
                          line=block_line, ordinal=ordinal)


def _parse_doc_block(body: str, path: Path, lineno: int, ordinal: int,
                     seen: set[str]) -> Document:
    m = _DOCNO_RE.search(body)
    if m is None:
        raise FormatError("missing <DOCNO>", path=str(path), line=lineno, ordinal=ordinal)
    doc_id = m.group(1).strip()
    if not doc_id:
        raise FormatError("empty <DOCNO>", path=str(path), line=lineno, ordinal=ordinal)
    if doc_id in seen:
        raise DuplicateIdError(f"duplicate doc id {doc_id!r}", path=str(path),
                               line=lineno, ordinal=ordinal)
    seen.add(doc_id)
    text = " ".join(part.strip() for part in _TEXT_RE.findall(body))
    return Document(doc_id, text)


def load_queries(path: str | Path) -> list[QueryRecord]:
    """Read a TSV query file ("qid<TAB>query text" per line)."""
    queries: list[QueryRecord] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            if "\t" not in line:
                raise FormatError("expected 'qid<TAB>query text'", path=str(path), line=lineno)
            qid, text = line.split("\t", 1)
            if not qid:
                raise FormatError("empty query id", path=str(path), line=lineno)
            queries.append(QueryRecord(qid, text))
    return queries


def load_expansions(path: str | Path) -> ExpansionSet:
    """Load an expansion jsonl file, preserving per-doc insertion order."""
    out = ExpansionSet()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"invalid JSON: {exc.msg}", path=str(path), line=lineno) from exc
            if not isinstance(record, dict) or "id" not in record:
                raise FormatError('missing "id" field', path=str(path), line=lineno)
            if "predicted_queries" not in record:
                raise FormatError('missing "predicted_queries" field', path=str(path), line=lineno)
            queries = record["predicted_queries"]
            if not isinstance(queries, list) or any(not isinstance(q, str) for q in queries):
                raise FormatError('"predicted_queries" must be an array of strings',
                                  path=str(path), line=lineno)
            try:
                out.add(str(record["id"]), queries)
            except ValueError as exc:
                raise FormatError(str(exc), path=str(path), line=lineno) from exc
    return out


def save_expansions(exp: ExpansionSet, out: TextIO) -> None:
    """Serialize an ExpansionSet back to jsonl (load/save round-trips)."""
    for doc_id, queries in exp.expansions.items():
        out.write(json.dumps({"id": doc_id, "predicted_queries": queries},
                             ensure_ascii=False) + "\n")


def apply_expansions(doc: Document, exp: ExpansionSet, repeat: int = 1) -> Document:
    """Append the doc's expansion strings (each ``repeat`` times) to its text.

    A document without expansions is returned unchanged.
    """
    if repeat < 1:
        raise ValueError(f"repeat must be >= 1, got {repeat}")
    strings = exp.get(doc.id)
    if not strings:
        return doc
    appended = " ".join(s for s in strings for _ in range(repeat))
    return Document(doc.id, f"{doc.text} {appended}" if doc.text else appended)


def expansion_token_count(exp: ExpansionSet, doc_id: str, repeat: int = 1,
                          config: AnalyzerConfig = DEFAULT_CONFIG) -> int:
    """Number of tokens appending these expansions adds to the document."""
    return repeat * sum(len(analyze_terms(s, config)) for s in exp.get(doc_id))
