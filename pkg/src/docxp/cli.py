"""Command-line experiment harness.

Subcommands cover the full pipeline: build an index (optionally folding
expansion files into the documents first), run queries with any scorer
with or without RM3, segment documents into generator-ready passages,
regroup per-passage expansions per document, produce weak-supervision
training pairs, score runs against qrels, and render corpus analyses.

Conventions: data goes to files, diagnostics to stderr; exit code 0 on
success, 1 on runtime failure, 2 on usage or input-format errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .analysis import terms as analyze_terms
from .config import EngineConfig, load_config
from .corpus import (CORPUS_FORMATS, apply_expansions, load_corpus,
                     load_expansions, load_queries, save_expansions, ExpansionSet)
from .errors import EmptyCorpusError, FormatError, SnapshotError
from .evaluation import (doc_length_histogram, evaluate, format_report,
                         load_passage_records, load_qrels,
                         relevant_passage_distribution, write_per_query_jsonl)
from .index import build_index, load_index, save_index
from .rm3 import RM3Params, search_rm3
from .scoring import BM25Params, DirichletParams, JMParams, SCORERS
from .search import run_batch, search, write_run, load_run, RunRanking
from .segmentation import select
from .weak import generate_pairs, write_pairs

log = logging.getLogger("docxp")


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (FormatError, SnapshotError, EmptyCorpusError) as exc:
        log.error("%s", exc)
        return 2
    except ValueError as exc:
        log.error("%s", exc)
        return 2
    except KeyboardInterrupt:
        return 1
    except OSError as exc:
        log.error("%s", exc)
        return 1


_FORMATS_HELP = """\
file formats:
  corpus jsonl       one object per line: {"id": "...", "contents": "..."}
  corpus trecweb     <DOC> blocks with <DOCNO> and <TEXT> sections
  queries            TSV, one "qid<TAB>query text" per line
  expansions jsonl   {"id": "...", "predicted_queries": ["...", ...]}
  passages jsonl     {"id": "<doc_id>#<window_index>", "contents": "...", "parent": "<doc_id>"}
  pairs jsonl        {"query", "passage", "qid", "rank", "score"}
  run file           TREC 6-column: "qid Q0 docid rank score tag" (score, 6 decimals)
  qrels              TREC 4-column: "qid 0 docid grade"
  passage records    jsonl {"doc_id": "...", "passage": "..."} (analyze --passages)
  config             INI sections [analyzer] [bm25] [qld] [qljm] [rm3] [segmentation]
"""


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="docxp",
        description="Document-expansion retrieval engine and experiment harness.",
        epilog=_FORMATS_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"docxp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="build an index snapshot from a corpus")
    p.add_argument("--input", required=True, help="corpus file")
    p.add_argument("--format", choices=CORPUS_FORMATS, default="jsonl")
    p.add_argument("--output", required=True, help="snapshot file to write")
    p.add_argument("--expansions", help="expansion jsonl appended to documents before indexing")
    p.add_argument("--repeat", type=int, default=1,
                   help="times each expansion string is appended (default 1)")
    p.add_argument("--config", help="engine config file")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("search", help="run a query batch and write a TREC run file")
    p.add_argument("--index", required=True, help="index snapshot")
    p.add_argument("--queries", required=True, help="TSV query file (qid<TAB>text)")
    p.add_argument("--scorer", choices=SCORERS, default="bm25")
    p.add_argument("--k", type=int, default=1000)
    p.add_argument("--output", required=True, help="run file to write")
    p.add_argument("--run-tag", default="docxp")
    p.add_argument("--k1", type=float, help="BM25 k1 (default 0.9)")
    p.add_argument("--b", type=float, help="BM25 b (default 0.4)")
    p.add_argument("--mu", type=float, help="QLD mu (default 1000)")
    p.add_argument("--lambda", dest="lam", type=float, help="QLJM lambda (default 0.1)")
    p.add_argument("--rm3", action="store_true", help="apply RM3 query expansion")
    p.add_argument("--rm3.fbDocs", dest="rm3_fb_docs", type=int,
                   help="RM3 feedback docs (default 10)")
    p.add_argument("--rm3.fbTerms", dest="rm3_fb_terms", type=int,
                   help="RM3 feedback terms (default 10)")
    p.add_argument("--rm3.alpha", dest="rm3_alpha", type=float,
                   help="RM3 original-query weight (default 0.5)")
    p.add_argument("--rm3.source", dest="rm3_source",
                   help="index snapshot supplying feedback statistics (default: --index)")
    p.add_argument("--exhaustive", action="store_true",
                   help="score every document, not just candidates (oracle mode)")
    p.add_argument("--config", help="engine config file")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("segment", help="emit generator-ready passages from a corpus")
    p.add_argument("--input", required=True, help="corpus file")
    p.add_argument("--format", choices=CORPUS_FORMATS, default="jsonl")
    p.add_argument("--strategy", choices=("concat", "first-k", "pi"), required=True)
    p.add_argument("--window", type=int, help="window size in tokens (default 60)")
    p.add_argument("--stride", type=int, help="window stride in tokens (default 30)")
    p.add_argument("--k-sentences", type=int, help="sentences for first-k (default 5)")
    p.add_argument("--output", required=True, help="passages jsonl to write")
    p.add_argument("--config", help="engine config file")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("fold-expansions",
                       help="regroup per-passage expansions per parent document")
    p.add_argument("--passages-expansions", required=True,
                   help="expansion jsonl keyed by '<doc_id>#<window_index>'")
    p.add_argument("--output", required=True, help="expansion jsonl keyed by doc id")
    p.set_defaults(func=cmd_fold)

    p = sub.add_parser("weak-pairs",
                       help="retrieval-based pseudo annotation: (passage, query) pairs")
    p.add_argument("--corpus", required=True, help="target corpus file")
    p.add_argument("--format", choices=CORPUS_FORMATS, default="jsonl")
    p.add_argument("--queries", required=True, help="out-of-domain TSV query file")
    p.add_argument("--scorer", choices=SCORERS, default="bm25")
    p.add_argument("--k", type=int, default=1, help="pairs per query (default 1)")
    p.add_argument("--max-passage-tokens", type=int, default=60)
    p.add_argument("--output", required=True, help="pairs jsonl to write")
    p.add_argument("--config", help="engine config file")
    p.set_defaults(func=cmd_weak_pairs)

    p = sub.add_parser("evaluate", help="score a run file against qrels")
    p.add_argument("--run", required=True, help="TREC run file")
    p.add_argument("--qrels", required=True, help="4-column TREC qrels file")
    p.add_argument("--output", help="write the text table here instead of stdout")
    p.add_argument("--per-query", help="write per-query rows as jsonl")
    p.add_argument("--figure", help="render a per-query MAP bar chart (png)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("analyze", help="corpus histograms (lengths, passage positions)")
    p.add_argument("--corpus", required=True, help="corpus file")
    p.add_argument("--format", choices=CORPUS_FORMATS, default="jsonl")
    p.add_argument("--bucket-width", type=int, default=100)
    p.add_argument("--passages", help="jsonl of {doc_id, passage} relevance records")
    p.add_argument("--output-dir", required=True)
    p.add_argument("--config", help="engine config file")
    p.set_defaults(func=cmd_analyze)

    return parser


def _engine_config(args) -> EngineConfig:
    return load_config(getattr(args, "config", None))


def _scorer_params(args, cfg: EngineConfig):
    def flag(name):
        return getattr(args, name, None)

    if args.scorer == "bm25":
        base = cfg.bm25
        k1, b = flag("k1"), flag("b")
        return BM25Params(k1=k1 if k1 is not None else base.k1,
                          b=b if b is not None else base.b)
    if args.scorer == "qld":
        mu = flag("mu")
        return DirichletParams(mu=mu if mu is not None else cfg.qld.mu)
    lam = flag("lam")
    return JMParams(lam=lam if lam is not None else cfg.qljm.lam)


def cmd_index(args) -> int:
    cfg = _engine_config(args)
    docs = load_corpus(args.input, args.format)
    if args.expansions:
        exp = load_expansions(args.expansions)
        applied: set[str] = set()

        def expanded():
            for doc in docs:
                if doc.id in exp:
                    applied.add(doc.id)
                yield apply_expansions(doc, exp, args.repeat)

        index = build_index(expanded(), cfg.analyzer)
        missing = set(exp.expansions) - applied
        if missing:
            sample = ", ".join(sorted(missing)[:5])
            raise FormatError(f"{len(missing)} expansion doc ids not in corpus "
                              f"(e.g. {sample})", path=args.expansions)
    else:
        index = build_index(docs, cfg.analyzer)
    save_index(index, args.output)
    log.info("indexed %d docs, %d terms, %d tokens -> %s",
             index.n_docs, len(index.postings), index.total_terms, args.output)
    return 0


def cmd_search(args) -> int:
    cfg = _engine_config(args)
    index = load_index(args.index)
    queries = load_queries(args.queries)
    params = _scorer_params(args, cfg)
    if args.rm3:
        base = cfg.rm3
        rm3 = RM3Params(
            fb_docs=args.rm3_fb_docs if args.rm3_fb_docs is not None else base.fb_docs,
            fb_terms=args.rm3_fb_terms if args.rm3_fb_terms is not None else base.fb_terms,
            alpha=args.rm3_alpha if args.rm3_alpha is not None else base.alpha,
        )
        feedback = load_index(args.rm3_source) if args.rm3_source else None
        run: RunRanking = {}
        for record in queries:
            if record.id in run:
                raise FormatError(f"duplicate query id {record.id!r}", path=args.queries)
            if not analyze_terms(record.text, cfg.analyzer):
                log.warning("query %s analyzed to zero tokens; no results", record.id)
                run[record.id] = []
                continue
            run[record.id] = search_rm3(index, record.text, args.scorer, params,
                                        args.k, rm3, cfg.analyzer, feedback)
    else:
        run = run_batch(index, queries, args.scorer, params, args.k,
                        cfg.analyzer, args.exhaustive)
    with open(args.output, "w", encoding="utf-8") as out:
        write_run(run, out, args.run_tag)
    log.info("wrote %d result lines for %d queries -> %s",
             sum(len(r) for r in run.values()), len(run), args.output)
    return 0


def cmd_segment(args) -> int:
    cfg = _engine_config(args)
    strategy = args.strategy.replace("-", "_")
    window = args.window if args.window is not None else cfg.window_tokens
    stride = args.stride if args.stride is not None else cfg.stride_tokens
    k_sent = args.k_sentences if args.k_sentences is not None else cfg.k_sentences
    stats = None
    if strategy == "pi":
        # importance scoring needs corpus-level idf; one extra pass
        stats = build_index(load_corpus(args.input, args.format), cfg.analyzer)
    written = 0
    skipped = 0
    with open(args.output, "w", encoding="utf-8") as out:
        for doc in load_corpus(args.input, args.format):
            try:
                selection = select(doc, strategy, window, stride, k_sent,
                                   stats, cfg.analyzer)
            except ValueError:
                log.warning("document %s has no sentences; skipped", doc.id)
                skipped += 1
                continue
            for w in selection.windows:
                record = {"id": f"{doc.id}#{w.window_index}",
                          "contents": w.text, "parent": doc.id}
                out.write(json.dumps(record, ensure_ascii=False) + "\n")
                written += 1
    log.info("wrote %d passages (%d docs skipped) -> %s", written, skipped, args.output)
    return 0


def cmd_fold(args) -> int:
    grouped: dict[str, list[tuple[int, list[str]]]] = {}
    per_passage = load_expansions(args.passages_expansions)
    for passage_id, queries in per_passage.expansions.items():
        parent, _, idx = passage_id.rpartition("#")
        if not parent or not idx.isdigit():
            raise FormatError(f"passage id {passage_id!r} is not '<doc_id>#<window_index>'",
                              path=args.passages_expansions)
        grouped.setdefault(parent, []).append((int(idx), queries))
    folded = ExpansionSet()
    for parent, entries in grouped.items():
        for _, queries in sorted(entries, key=lambda e: e[0]):
            folded.add(parent, queries)
    with open(args.output, "w", encoding="utf-8") as out:
        save_expansions(folded, out)
    log.info("folded %d passages into %d documents -> %s",
             len(per_passage), len(folded), args.output)
    return 0


def cmd_weak_pairs(args) -> int:
    cfg = _engine_config(args)
    texts: dict[str, str] = {}

    def remembered():
        for doc in load_corpus(args.corpus, args.format):
            texts[doc.id] = doc.text
            yield doc

    index = build_index(remembered(), cfg.analyzer)
    queries = load_queries(args.queries)
    params = _scorer_params(args, cfg)
    pairs = generate_pairs(index, texts, queries, args.scorer, params,
                           args.k, args.max_passage_tokens, cfg.analyzer)
    with open(args.output, "w", encoding="utf-8") as out:
        count = write_pairs(pairs, out)
    log.info("wrote %d pairs for %d queries -> %s", count, len(queries), args.output)
    return 0


def cmd_evaluate(args) -> int:
    run = load_run(args.run)
    qrels = load_qrels(args.qrels)
    report = evaluate(run, qrels)
    table = format_report(report)
    if args.output:
        Path(args.output).write_text(table + "\n", encoding="utf-8")
    else:
        print(table)
    if args.per_query:
        with open(args.per_query, "w", encoding="utf-8") as out:
            write_per_query_jsonl(report, out)
    if args.figure:
        from .plotting import plot_per_query_metric
        plot_per_query_metric(report.per_query, "map", args.figure)
    return 0


def cmd_analyze(args) -> int:
    from .plotting import plot_histogram, plot_passage_distribution

    cfg = _engine_config(args)
    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    buckets = doc_length_histogram(load_corpus(args.corpus, args.format),
                                   args.bucket_width, cfg.analyzer)
    with open(out_dir / "doc_lengths.tsv", "w", encoding="utf-8") as out:
        out.write("bucket_start\tcount\n")
        for bucket, count in buckets:
            out.write(f"{bucket * args.bucket_width}\t{count}\n")
    plot_histogram(buckets, args.bucket_width, out_dir / "doc_lengths.png",
                   "document length distribution", "tokens")
    log.info("wrote doc_lengths.{tsv,png} (%d buckets) in %s", len(buckets), out_dir)

    if args.passages:
        texts = {doc.id: doc.text for doc in load_corpus(args.corpus, args.format)}
        counts, not_found = relevant_passage_distribution(
            texts, load_passage_records(args.passages), cfg.analyzer)
        with open(out_dir / "passage_positions.tsv", "w", encoding="utf-8") as out:
            out.write("window_index\tcount\n")
            for idx, count in counts:
                out.write(f"{idx}\t{count}\n")
            out.write(f"not_found\t{not_found}\n")
        plot_passage_distribution(counts, not_found, out_dir / "passage_positions.png")
        log.info("wrote passage_positions.{tsv,png} in %s", out_dir)
    return 0


if __name__ == "__main__":
    sys.exit(main())
