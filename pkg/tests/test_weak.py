from __future__ import annotations

import io

import pytest

from docxp.analysis import terms
from docxp.corpus import Document, QueryRecord
from docxp.index import build_index
from docxp.weak import generate_pairs, head_passage, write_pairs


@pytest.fixture
def target():
    docs = [
        Document("d1", "solar panels convert sunlight. they power homes."),
        Document("d2", "wind turbines spin. blades catch moving air."),
        Document("d3", "a long document. " + " ".join(f"filler{i} word." for i in range(80))),
    ]
    return docs, build_index(docs), {d.id: d.text for d in docs}


class TestGeneratePairs:
    def test_single_matching_doc_single_pair(self, target):
        docs, idx, texts = target
        pairs = list(generate_pairs(idx, texts, [QueryRecord("q1", "sunlight")], k=3))
        assert len(pairs) == 1
        assert pairs[0].source_query_id == "q1"
        assert pairs[0].rank == 1
        assert pairs[0].query_text == "sunlight"
        assert "solar" in pairs[0].passage_text

    def test_k_larger_than_candidates(self, target):
        _, idx, texts = target
        queries = [QueryRecord("q1", "solar wind")]  # matches d1 and d2 only
        pairs = list(generate_pairs(idx, texts, queries, k=3))
        assert len(pairs) == 2
        assert [p.rank for p in pairs] == [1, 2]

    def test_empty_query_file(self, target):
        _, idx, texts = target
        assert list(generate_pairs(idx, texts, [])) == []

    def test_no_hits_no_pairs(self, target):
        _, idx, texts = target
        assert list(generate_pairs(idx, texts, [QueryRecord("q1", "quantum")])) == []

    def test_pair_count_min_k_candidates(self, target):
        _, idx, texts = target
        queries = [QueryRecord("q1", "solar wind filler0")]
        for k in (1, 2, 3, 5):
            pairs = list(generate_pairs(idx, texts, queries, k=k))
            assert len(pairs) == min(k, 3)

    def test_long_doc_cut_to_head_window(self, target):
        docs, idx, texts = target
        pairs = list(generate_pairs(idx, texts, [QueryRecord("q1", "filler5")],
                                    k=1, max_passage_tokens=10))
        (pair,) = pairs
        head = pair.passage_text
        # head window: whole leading sentences totaling >= 10 tokens,
        # with at most the last sentence spilling over
        assert terms(texts["d3"])[:len(terms(head))] == terms(head)
        assert len(terms(head)) >= min(10, len(terms(texts["d3"])))

    def test_passage_token_budget_with_spillover(self, target):
        docs, idx, texts = target
        long_doc = Document("d3", texts["d3"])
        head = head_passage(long_doc, 10)
        # sentences are 3 then 2 tokens each; 10 -> 4 sentences = 11 tokens
        assert len(terms(head)) <= 10 + 2

    def test_k_validation(self, target):
        _, idx, texts = target
        with pytest.raises(ValueError):
            list(generate_pairs(idx, texts, [], k=0))


class TestWritePairs:
    def test_jsonl_shape_and_determinism(self, target):
        _, idx, texts = target
        queries = [QueryRecord("q1", "solar wind"), QueryRecord("q2", "turbines")]

        def render() -> str:
            buf = io.StringIO()
            write_pairs(generate_pairs(idx, texts, queries, k=2), buf)
            return buf.getvalue()

        first = render()
        assert first == render()
        import json
        rows = [json.loads(line) for line in first.splitlines()]
        assert all(set(r) == {"query", "passage", "qid", "rank", "score"} for r in rows)
        assert [r["qid"] for r in rows] == ["q1", "q1", "q2"]
