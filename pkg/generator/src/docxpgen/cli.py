"""docxp-gen: batch expansion generation and fine-tuning."""

from __future__ import annotations

import argparse
import logging
import sys

from .config import GenerationConfig
from .finetune import TrainSettings, finetune
from .generate import generate_file
from .schemas import SchemaError

log = logging.getLogger("docxp-gen")


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (SchemaError, ValueError) as exc:
        log.error("%s", exc)
        return 2
    except OSError as exc:
        log.error("%s", exc)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="docxp-gen",
        description="Expansion generator: passages jsonl in, expansions jsonl out.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate expansions for a passage file")
    p.add_argument("--passages", required=True, help="passages jsonl from the engine")
    p.add_argument("--output", required=True, help="expansions jsonl to write")
    p.add_argument("--model", default="extractive",
                   help="extractive | artifact:<dir> | hf:<name-or-path>")
    p.add_argument("--samples", type=int, default=1, help="queries per passage")
    p.add_argument("--max-input-tokens", type=int, default=64)
    p.add_argument("--max-output-tokens", type=int, default=16)
    p.add_argument("--sample", action="store_true",
                   help="sample instead of greedy decoding")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--batch-size", type=int, default=16)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("finetune", help="train a small model on weak-supervision pairs")
    p.add_argument("--pairs", required=True, help="pairs jsonl from 'docxp weak-pairs'")
    p.add_argument("--output-dir", required=True, help="artifact directory to write")
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--batch-size", type=int, default=8)
    p.add_argument("--lr", type=float, default=1e-2)
    p.add_argument("--embed-dim", type=int, default=64)
    p.add_argument("--hidden-dim", type=int, default=128)
    p.add_argument("--seed", type=int, default=13)
    p.set_defaults(func=cmd_finetune)

    return parser


def cmd_generate(args) -> int:
    config = GenerationConfig(
        model=args.model,
        samples_per_passage=args.samples,
        max_input_tokens=args.max_input_tokens,
        max_output_tokens=args.max_output_tokens,
        greedy=not args.sample,
        seed=args.seed,
        batch_size=args.batch_size,
    )
    with open(args.output, "w", encoding="utf-8") as out:
        stats = generate_file(args.passages, out, config)
    log.info("wrote %d records -> %s", stats.passages, args.output)
    return 0


def cmd_finetune(args) -> int:
    settings = TrainSettings(
        epochs=args.epochs,
        batch_size=args.batch_size,
        lr=args.lr,
        embed_dim=args.embed_dim,
        hidden_dim=args.hidden_dim,
        seed=args.seed,
    )
    summary = finetune(args.pairs, args.output_dir, settings)
    log.info("trained on %d pairs, final loss %.4f", summary.pairs, summary.final_loss)
    return 0


if __name__ == "__main__":
    sys.exit(main())
