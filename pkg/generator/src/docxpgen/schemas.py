"""jsonl contracts shared with the retrieval engine.

Inbound: passages ({"id", "contents"[, "parent"]}) and training pairs
({"query", "passage", "qid", "rank", "score"}). Outbound: expansions
({"id", "predicted_queries"}). Ids pass through verbatim.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, TextIO


class SchemaError(ValueError):
    def __init__(self, message: str, path: str | Path | None = None,
                 line: int | None = None):
        where = f"{path}, line {line}: " if path is not None else ""
        super().__init__(f"{where}{message}")
        self.line = line


@dataclass(frozen=True)
class Passage:
    id: str
    contents: str
    parent: str | None = None


@dataclass(frozen=True)
class Pair:
    query: str
    passage: str
    qid: str
    rank: int
    score: float


def _records(path: str | Path) -> Iterator[tuple[int, dict]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"invalid JSON: {exc.msg}", path, lineno) from exc
            if not isinstance(record, dict):
                raise SchemaError("expected a JSON object", path, lineno)
            yield lineno, record


def read_passages(path: str | Path) -> Iterator[Passage]:
    for lineno, record in _records(path):
        for field in ("id", "contents"):
            if field not in record:
                raise SchemaError(f'missing "{field}" field', path, lineno)
        if not str(record["id"]):
            raise SchemaError("empty passage id", path, lineno)
        yield Passage(str(record["id"]), str(record["contents"]),
                      str(record["parent"]) if "parent" in record else None)


PAIR_FIELDS = ("query", "passage", "qid", "rank", "score")


def read_pairs(path: str | Path) -> Iterator[Pair]:
    for lineno, record in _records(path):
        for field in PAIR_FIELDS:
            if field not in record:
                raise SchemaError(f'missing "{field}" field', path, lineno)
        if not str(record["passage"]).strip():
            raise SchemaError("empty passage text", path, lineno)
        try:
            rank = int(record["rank"])
            score = float(record["score"])
        except (TypeError, ValueError):
            raise SchemaError("rank/score must be numeric", path, lineno) from None
        yield Pair(str(record["query"]), str(record["passage"]),
                   str(record["qid"]), rank, score)


def validate_pairs(path: str | Path) -> int:
    """Pre-flight check of a training file; returns the pair count."""
    count = 0
    for _ in read_pairs(path):
        count += 1
    if count == 0:
        raise SchemaError("training file contains no pairs", path)
    return count


def write_expansions(rows: Iterator[tuple[str, list[str]]], out: TextIO) -> int:
    count = 0
    for passage_id, queries in rows:
        out.write(json.dumps({"id": passage_id, "predicted_queries": queries},
                             ensure_ascii=False) + "\n")
        count += 1
    return count
