"""In-memory inverted index and its flat binary snapshot.

The index stores tf-only postings (no positions) plus the collection
statistics every scorer needs: per-document lengths, document count N,
average document length, per-term document and collection frequencies,
and the total token count of the collection.

Snapshot layout (little-endian):
    magic "XIDX1" | version u8 | N u32 | total_terms u64
    N x (id_len u32, id utf-8, doc_len u32)
    vocab_size u32
    vocab_size x (term_len u32, term utf-8, df u32, df x (ordinal u32, tf u32))
"""

from __future__ import annotations

import struct
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple

from .analysis import AnalyzerConfig, DEFAULT_CONFIG, terms as analyze_terms
from .corpus import Document
from .errors import DuplicateIdError, EmptyCorpusError, SnapshotError

MAGIC = b"XIDX1"
VERSION = 1


class Posting(NamedTuple):
    doc: int  # document ordinal (ingestion order)
    tf: int


@dataclass
class InvertedIndex:
    postings: dict[str, list[Posting]] = field(default_factory=dict)
    doc_ids: list[str] = field(default_factory=list)
    doc_lengths: list[int] = field(default_factory=list)
    cf: dict[str, int] = field(default_factory=dict)
    total_terms: int = 0

    @property
    def n_docs(self) -> int:
        return len(self.doc_ids)

    @property
    def avgdl(self) -> float:
        return self.total_terms / self.n_docs if self.n_docs else 0.0

    def df(self, term: str) -> int:
        return len(self.postings.get(term, ()))

    def lookup(self, term: str) -> list[Posting]:
        """Postings for ``term``; empty list for unknown terms."""
        return self.postings.get(term, [])

    def ordinal_of(self, doc_id: str) -> int:
        try:
            return self.doc_ids.index(doc_id)
        except ValueError:
            raise KeyError(doc_id) from None

    def tf(self, term: str, ordinal: int) -> int:
        """Term frequency of ``term`` in the document at ``ordinal`` (0 if absent)."""
        plist = self.postings.get(term)
        if not plist:
            return 0
        lo, hi = 0, len(plist)
        while lo < hi:
            mid = (lo + hi) // 2
            if plist[mid].doc < ordinal:
                lo = mid + 1
            else:
                hi = mid
        if lo < len(plist) and plist[lo].doc == ordinal:
            return plist[lo].tf
        return 0

    def doc_vector(self, ordinal: int) -> dict[str, int]:
        """Term -> tf map of one document, reconstructed from the postings.

        Full dictionary scan with a binary search per term; adequate for
        the per-query feedback-doc lookups it serves.
        """
        if not 0 <= ordinal < self.n_docs:
            raise IndexError(f"doc ordinal {ordinal} out of range")
        vec: dict[str, int] = {}
        for term, plist in self.postings.items():
            if plist[0].doc > ordinal or plist[-1].doc < ordinal:
                continue
            tf = self.tf(term, ordinal)
            if tf:
                vec[term] = tf
        return vec

    def check_invariants(self) -> None:
        """Assert the structural invariants; raises AssertionError on violation."""
        assert self.n_docs == len(self.doc_lengths)
        assert self.total_terms == sum(self.doc_lengths)
        assert sum(self.cf.values()) == self.total_terms
        for term, plist in self.postings.items():
            assert plist, f"empty postings list for {term!r}"
            assert self.cf[term] == sum(p.tf for p in plist)
            assert all(p.tf >= 1 for p in plist)
            assert all(a.doc < b.doc for a, b in zip(plist, plist[1:]))


def build_index(docs: Iterable[Document],
                config: AnalyzerConfig = DEFAULT_CONFIG) -> InvertedIndex:
    """Build an index over ``docs``; ordinals follow ingestion order."""
    index = InvertedIndex()
    seen: set[str] = set()
    for doc in docs:
        if doc.id in seen:
            raise DuplicateIdError(f"duplicate doc id {doc.id!r}")
        seen.add(doc.id)
        ordinal = len(index.doc_ids)
        counts = Counter(analyze_terms(doc.text, config))
        length = sum(counts.values())
        index.doc_ids.append(doc.id)
        index.doc_lengths.append(length)
        index.total_terms += length
        for term in sorted(counts):
            index.postings.setdefault(term, []).append(Posting(ordinal, counts[term]))
            index.cf[term] = index.cf.get(term, 0) + counts[term]
    if not index.doc_ids:
        raise EmptyCorpusError("cannot build an index over an empty corpus")
    return index


def save_index(index: InvertedIndex, path: str | Path) -> None:
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<B", VERSION))
        fh.write(struct.pack("<IQ", index.n_docs, index.total_terms))
        for doc_id, length in zip(index.doc_ids, index.doc_lengths):
            raw = doc_id.encode("utf-8")
            fh.write(struct.pack("<I", len(raw)))
            fh.write(raw)
            fh.write(struct.pack("<I", length))
        fh.write(struct.pack("<I", len(index.postings)))
        for term in sorted(index.postings):
            raw = term.encode("utf-8")
            plist = index.postings[term]
            fh.write(struct.pack("<I", len(raw)))
            fh.write(raw)
            fh.write(struct.pack("<I", len(plist)))
            for posting in plist:
                fh.write(struct.pack("<II", posting.doc, posting.tf))


def load_index(path: str | Path) -> InvertedIndex:
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:len(MAGIC)] != MAGIC:
        raise SnapshotError(f"{path}: not an index snapshot (bad magic)")
    pos = len(MAGIC)
    (version,) = struct.unpack_from("<B", data, pos)
    pos += 1
    if version != VERSION:
        raise SnapshotError(f"{path}: unsupported snapshot version {version} "
                            f"(expected {VERSION})")
    n_docs, total_terms = struct.unpack_from("<IQ", data, pos)
    pos += 12
    index = InvertedIndex(total_terms=total_terms)
    for _ in range(n_docs):
        (id_len,) = struct.unpack_from("<I", data, pos)
        pos += 4
        doc_id = data[pos:pos + id_len].decode("utf-8")
        pos += id_len
        (length,) = struct.unpack_from("<I", data, pos)
        pos += 4
        index.doc_ids.append(doc_id)
        index.doc_lengths.append(length)
    (vocab_size,) = struct.unpack_from("<I", data, pos)
    pos += 4
    for _ in range(vocab_size):
        (term_len,) = struct.unpack_from("<I", data, pos)
        pos += 4
        term = data[pos:pos + term_len].decode("utf-8")
        pos += term_len
        (df,) = struct.unpack_from("<I", data, pos)
        pos += 4
        plist = []
        cf = 0
        for _ in range(df):
            doc, tf = struct.unpack_from("<II", data, pos)
            pos += 8
            plist.append(Posting(doc, tf))
            cf += tf
        index.postings[term] = plist
        index.cf[term] = cf
    if pos != len(data):
        raise SnapshotError(f"{path}: trailing bytes after snapshot payload")
    return index
