"""Adapter entry points: finetune, predict, tokenize, embed."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import AdapterConfig, write_manifest
from .data import read_corpus, read_lexicon_anchors, read_matches, write_jsonl
from .exports import export_embeddings, export_predictions, export_tokenizations
from .finetune import finetune


def _config(args) -> AdapterConfig:
    kwargs = {}
    if args.model:
        kwargs["model_name"] = args.model
    if getattr(args, "epochs", None):
        kwargs["epochs"] = args.epochs
    if getattr(args, "layer", None) is not None:
        kwargs["embedding_layer"] = args.layer
    return AdapterConfig(**kwargs)


def cmd_finetune(args) -> int:
    config = _config(args)
    tweets = read_corpus(args.corpus)
    finetune(tweets, args.task, config, args.out, seed=args.seed)
    print(f"checkpoint written to {args.out}")
    return 0


def cmd_predict(args) -> int:
    config = _config(args)
    tweets = read_corpus(args.corpus)
    if args.split:
        tweets = [t for t in tweets if t.split == args.split]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    records = export_predictions(
        args.checkpoint, tweets, args.task, args.run_id, out / "predictions.jsonl", config
    )
    write_manifest(out, config, "predict", task=args.task, run_id=args.run_id, count=len(records))
    print(f"{len(records)} predictions written to {out / 'predictions.jsonl'}")
    return 0


def cmd_tokenize(args) -> int:
    config = _config(args)
    tweets = read_corpus(args.corpus)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    records = export_tokenizations(config.model_name, tweets, out / "tokenizations.jsonl")
    write_manifest(out, config, "tokenize", count=len(records))
    print(f"{len(records)} tokenizations written to {out / 'tokenizations.jsonl'}")
    return 0


def cmd_embed(args) -> int:
    config = _config(args)
    tweets = read_corpus(args.corpus)
    spans = read_matches(args.matches)
    anchors = read_lexicon_anchors(args.lexicon)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    records = []
    stages = [("pretrained", config.model_name)]
    if args.checkpoint:
        stages.append(("finetuned", args.checkpoint))
    for tag, source in stages:
        records += export_embeddings(
            source, tag, tweets, spans, anchors, out / f"embeddings_{tag}.jsonl", config
        )
    combined = out / "embeddings.jsonl"
    write_jsonl(combined, records)
    write_manifest(out, config, "embed", count=len(records), stages=[s[0] for s in stages])
    print(f"{len(records)} embedding records written to {combined}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="adapter", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("finetune", help="fine-tune the encoder for one task")
    p.add_argument("--corpus", required=True)
    p.add_argument("--task", required=True, choices=("pej", "mis"))
    p.add_argument("--model", default="", help="base model name or local directory")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_finetune)

    p = sub.add_parser("predict", help="export prediction records")
    p.add_argument("--corpus", required=True)
    p.add_argument("--task", required=True, choices=("pej", "mis"))
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--model", default="")
    p.add_argument("--split", default="", choices=("", "train", "test"))
    p.add_argument("--run-id", type=int, default=0, dest="run_id")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("tokenize", help="export subword tokenizations with offsets")
    p.add_argument("--corpus", required=True)
    p.add_argument("--model", default="")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_tokenize)

    p = sub.add_parser("embed", help="export span and anchor embeddings")
    p.add_argument("--corpus", required=True)
    p.add_argument("--matches", required=True, help="matches.jsonl from the toolkit's match command")
    p.add_argument("--lexicon", required=True, help="lexicon TSV")
    p.add_argument("--model", default="", help="pretrained base model")
    p.add_argument("--checkpoint", default="", help="fine-tuned checkpoint for the finetuned stage")
    p.add_argument("--layer", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_embed)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
