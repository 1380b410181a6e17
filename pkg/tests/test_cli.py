from __future__ import annotations

import json

import pytest

from docxp.cli import main
from docxp.corpus import load_expansions
from docxp.index import load_index

TOY_CORPUS = '{"id":"d1","contents":"a b a"}\n{"id":"d2","contents":"b c"}\n'


@pytest.fixture
def toy_paths(tmp_path):
    corpus = tmp_path / "corpus.jsonl"
    corpus.write_text(TOY_CORPUS)
    queries = tmp_path / "queries.tsv"
    queries.write_text("q1\ta\nq2\tb\n")
    return tmp_path, corpus, queries


def run_cli(*argv) -> int:
    return main([str(a) for a in argv])


class TestIndexCommand:
    def test_snapshot_round_trip_equals_in_memory(self, toy_paths):
        tmp, corpus, _ = toy_paths
        out = tmp / "idx.bin"
        assert run_cli("index", "--input", corpus, "--output", out) == 0
        idx = load_index(out)
        assert idx.n_docs == 2
        assert idx.cf == {"a": 2, "b": 2, "c": 1}

    def test_empty_expansion_file_is_identity(self, toy_paths):
        tmp, corpus, _ = toy_paths
        exp = tmp / "empty.jsonl"
        exp.write_text("")
        plain, expanded = tmp / "plain.bin", tmp / "exp.bin"
        assert run_cli("index", "--input", corpus, "--output", plain) == 0
        assert run_cli("index", "--input", corpus, "--output", expanded,
                       "--expansions", exp) == 0
        assert plain.read_bytes() == expanded.read_bytes()

    def test_expansions_change_postings(self, toy_paths):
        tmp, corpus, _ = toy_paths
        exp = tmp / "exp.jsonl"
        exp.write_text('{"id":"d2","predicted_queries":["fresh terms"]}\n')
        out = tmp / "idx.bin"
        assert run_cli("index", "--input", corpus, "--output", out,
                       "--expansions", exp) == 0
        idx = load_index(out)
        assert idx.df("fresh") == 1

    def test_bad_jsonl_exits_2_with_line_number(self, toy_paths, tmp_path, capsys):
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"id":"d1","contents":"x"}\n{broken\n')
        code = run_cli("index", "--input", bad, "--output", tmp_path / "i.bin")
        assert code == 2

    def test_unknown_expansion_ids_rejected(self, toy_paths):
        tmp, corpus, _ = toy_paths
        exp = tmp / "exp.jsonl"
        exp.write_text('{"id":"ghost","predicted_queries":["boo"]}\n')
        assert run_cli("index", "--input", corpus, "--output", tmp / "i.bin",
                       "--expansions", exp) == 2


class TestSearchCommand:
    def test_golden_run_file_values(self, toy_paths):
        # scores must match the hand-derived values to 6 decimals
        tmp, corpus, queries = toy_paths
        idx, run = tmp / "idx.bin", tmp / "run.txt"
        run_cli("index", "--input", corpus, "--output", idx)
        assert run_cli("search", "--index", idx, "--queries", queries,
                       "--scorer", "bm25", "--k", "10",
                       "--run-tag", "toy", "--output", run) == 0
        lines = run.read_text().splitlines()
        assert lines[0] == "q1 Q0 d1 1 0.466452 toy"

    def test_qld_golden_values_and_order(self, toy_paths):
        tmp, corpus, queries = toy_paths
        idx, run = tmp / "idx.bin", tmp / "run.txt"
        run_cli("index", "--input", corpus, "--output", idx)
        run_cli("search", "--index", idx, "--queries", queries,
                "--scorer", "qld", "--mu", "1000", "--output", run)
        q2 = [l for l in run.read_text().splitlines() if l.startswith("q2")]
        assert q2[0].split()[2:5] == ["d2", "1", "-0.915792"]
        assert q2[1].split()[2:5] == ["d1", "2", "-0.916789"]

    def test_rm3_alpha_one_matches_plain_ranking(self, toy_paths):
        tmp, corpus, queries = toy_paths
        idx = tmp / "idx.bin"
        run_cli("index", "--input", corpus, "--output", idx)
        plain, rm3 = tmp / "plain.txt", tmp / "rm3.txt"
        run_cli("search", "--index", idx, "--queries", queries, "--output", plain)
        run_cli("search", "--index", idx, "--queries", queries, "--output", rm3,
                "--rm3", "--rm3.alpha", "1.0")
        docs = lambda p: [l.split()[:4:2] for l in p.read_text().splitlines()]
        assert docs(plain) == docs(rm3)

    def test_zero_token_query_warns_but_succeeds(self, toy_paths, capsys):
        tmp, corpus, _ = toy_paths
        idx, run = tmp / "idx.bin", tmp / "run.txt"
        bad_queries = tmp / "q.tsv"
        bad_queries.write_text("q1\t...\nq2\ta\n")
        run_cli("index", "--input", corpus, "--output", idx)
        assert run_cli("search", "--index", idx, "--queries", bad_queries,
                       "--output", run) == 0
        lines = run.read_text().splitlines()
        assert all(l.startswith("q2") for l in lines)

    def test_unknown_scorer_exits_2(self, toy_paths, capsys):
        tmp, corpus, queries = toy_paths
        with pytest.raises(SystemExit) as exc:
            run_cli("search", "--index", tmp / "i.bin", "--queries", queries,
                    "--scorer", "tfidf", "--output", tmp / "r.txt")
        assert exc.value.code == 2

    def test_determinism(self, toy_paths):
        tmp, corpus, queries = toy_paths
        idx = tmp / "idx.bin"
        run_cli("index", "--input", corpus, "--output", idx)
        a, b = tmp / "a.txt", tmp / "b.txt"
        for out in (a, b):
            run_cli("search", "--index", idx, "--queries", queries,
                    "--scorer", "qljm", "--output", out, "--rm3")
        assert a.read_bytes() == b.read_bytes()

    def test_missing_index_is_runtime_failure(self, toy_paths):
        tmp, _, queries = toy_paths
        assert run_cli("search", "--index", tmp / "absent.bin",
                       "--queries", queries, "--output", tmp / "r.txt") == 1

    def test_config_file_overrides_defaults(self, toy_paths):
        tmp, corpus, queries = toy_paths
        cfg = tmp / "engine.cfg"
        cfg.write_text("[analyzer]\nstopwords = b\n")
        idx = tmp / "idx.bin"
        run_cli("index", "--input", corpus, "--output", idx, "--config", cfg)
        from docxp.index import load_index
        loaded = load_index(idx)
        assert loaded.df("b") == 0  # stopword removed at index time
        assert loaded.df("a") == 1


class TestSegmentAndFold:
    def test_concat_passages_schema(self, tmp_path):
        corpus = tmp_path / "c.jsonl"
        text = " ".join(f"s{i} " * 20 + "." for i in range(6))
        corpus.write_text(json.dumps({"id": "doc", "contents": text}) + "\n")
        out = tmp_path / "passages.jsonl"
        assert run_cli("segment", "--input", corpus, "--strategy", "concat",
                       "--output", out) == 0
        rows = [json.loads(l) for l in out.read_text().splitlines()]
        assert [r["id"] for r in rows] == ["doc#0", "doc#1", "doc#2"]
        assert all(r["parent"] == "doc" for r in rows)

    def test_first_k_skips_empty_doc_with_warning(self, tmp_path):
        corpus = tmp_path / "c.jsonl"
        corpus.write_text('{"id":"ok","contents":"one sentence."}\n'
                          '{"id":"empty","contents":""}\n')
        out = tmp_path / "p.jsonl"
        assert run_cli("segment", "--input", corpus, "--strategy", "first-k",
                       "--output", out) == 0
        rows = [json.loads(l) for l in out.read_text().splitlines()]
        assert [r["id"] for r in rows] == ["ok#0"]

    def test_pi_picks_single_window(self, tmp_path):
        corpus = tmp_path / "c.jsonl"
        text = " ".join(f"s{i} " * 20 + "." for i in range(6))
        corpus.write_text(json.dumps({"id": "doc", "contents": text}) + "\n")
        out = tmp_path / "p.jsonl"
        assert run_cli("segment", "--input", corpus, "--strategy", "pi",
                       "--output", out) == 0
        rows = [json.loads(l) for l in out.read_text().splitlines()]
        assert len(rows) == 1
        assert rows[0]["parent"] == "doc"

    def test_fold_groups_by_parent_in_window_order(self, tmp_path):
        exp = tmp_path / "by_passage.jsonl"
        exp.write_text("\n".join([
            '{"id":"d1#1","predicted_queries":["second"]}',
            '{"id":"d2#0","predicted_queries":["other"]}',
            '{"id":"d1#0","predicted_queries":["first","bis"]}',
        ]) + "\n")
        out = tmp_path / "by_doc.jsonl"
        assert run_cli("fold-expansions", "--passages-expansions", exp,
                       "--output", out) == 0
        folded = load_expansions(out)
        assert folded.get("d1") == ["first", "bis", "second"]
        assert folded.get("d2") == ["other"]

    def test_fold_malformed_id_exits_2(self, tmp_path):
        exp = tmp_path / "bad.jsonl"
        exp.write_text('{"id":"no-window-index","predicted_queries":["x"]}\n')
        assert run_cli("fold-expansions", "--passages-expansions", exp,
                       "--output", tmp_path / "o.jsonl") == 2

    def test_fold_empty_input(self, tmp_path):
        exp = tmp_path / "empty.jsonl"
        exp.write_text("")
        out = tmp_path / "o.jsonl"
        assert run_cli("fold-expansions", "--passages-expansions", exp,
                       "--output", out) == 0
        assert out.read_text() == ""


class TestWeakPairsCommand:
    def test_pairs_written(self, toy_paths):
        tmp, corpus, queries = toy_paths
        out = tmp / "pairs.jsonl"
        assert run_cli("weak-pairs", "--corpus", corpus, "--queries", queries,
                       "--k", "2", "--output", out) == 0
        rows = [json.loads(l) for l in out.read_text().splitlines()]
        assert rows[0]["qid"] == "q1"
        assert rows[0]["rank"] == 1
        assert {r["qid"] for r in rows} == {"q1", "q2"}


class TestEvaluateCommand:
    def test_table_and_artifacts(self, toy_paths, capsys):
        tmp, corpus, queries = toy_paths
        idx, run = tmp / "idx.bin", tmp / "run.txt"
        run_cli("index", "--input", corpus, "--output", idx)
        run_cli("search", "--index", idx, "--queries", queries, "--output", run)
        qrels = tmp / "qrels.txt"
        qrels.write_text("q1 0 d1 1\nq2 0 d2 1\n")
        per_query = tmp / "per_query.jsonl"
        figure = tmp / "map.png"
        assert run_cli("evaluate", "--run", run, "--qrels", qrels,
                       "--per-query", per_query, "--figure", figure) == 0
        table = capsys.readouterr().out
        assert table.splitlines()[0].split()[0] == "qid"
        rows = [json.loads(l) for l in per_query.read_text().splitlines()]
        assert {r["qid"] for r in rows} == {"q1", "q2"}
        assert figure.exists() and figure.stat().st_size > 0


class TestAnalyzeCommand:
    def test_histograms_tsv_and_figures(self, tmp_path):
        corpus = tmp_path / "c.jsonl"
        corpus.write_text("\n".join(
            json.dumps({"id": f"d{i}", "contents": "tok " * (50 * i)})
            for i in range(1, 4)) + "\n")
        records = tmp_path / "rel.jsonl"
        records.write_text(json.dumps({"doc_id": "d2", "passage": "tok tok"}) + "\n")
        out_dir = tmp_path / "report"
        assert run_cli("analyze", "--corpus", corpus, "--bucket-width", "100",
                       "--passages", records, "--output-dir", out_dir) == 0
        lengths = (out_dir / "doc_lengths.tsv").read_text().splitlines()
        assert lengths[0] == "bucket_start\tcount"
        assert (out_dir / "doc_lengths.png").stat().st_size > 0
        positions = (out_dir / "passage_positions.tsv").read_text().splitlines()
        assert positions[-1].startswith("not_found\t")
        assert (out_dir / "passage_positions.png").stat().st_size > 0
