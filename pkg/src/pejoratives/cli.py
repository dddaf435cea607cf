"""Command-line entry points for the experiment toolkit.

Exit codes: 0 success, 1 validation or coverage failure, 2 configuration
error.  Commands that write artifacts hold a lock file in the output
directory so two writers cannot interleave.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from contextlib import contextmanager
from pathlib import Path

from . import __version__
from .classifier import (
    ClassifierError,
    Hyperparams,
    load_external_predictions,
    load_model,
    predict,
    save_model,
    save_predictions,
    train_baseline,
)
from .corpus import (
    AnnotationError,
    CorpusError,
    corpus_stats,
    load_corpus,
    match_corpus,
)
from .embeddings import (
    EmbeddingError,
    anchor_frequency,
    anchor_similarity_table,
    class_average_summary,
    load_embeddings,
    similarity_csv,
    similarity_wide_csv,
)
from .enrichment import EnrichmentError, enrich_corpus, write_enriched
from .evaluation import (
    EvaluationError,
    aggregate_runs,
    compare_pipelines,
    evaluate_run,
    report_from_dict,
    report_to_dict,
)
from .lexicon import LexiconError, UnknownWordError, default_lexicon, load_lexicon, validate_lexicon
from .matcher import MatchError
from .pipeline import (
    ConfigError,
    default_config_toml,
    gold_assignments,
    assignments_from_records,
    load_config,
    resolve_data_path,
    run_pipeline,
    write_manifest,
    write_matches,
    RunConfig,
    spans_for_enrichment,
)
from .prompts import PromptError, export_prompt_batch, ingest_responses, load_prompt_batch, render_review_table

VALIDATION_ERRORS = (
    LexiconError,
    UnknownWordError,
    CorpusError,
    AnnotationError,
    MatchError,
    EnrichmentError,
    ClassifierError,
    EvaluationError,
    EmbeddingError,
    PromptError,
)


@contextmanager
def output_lock(out_dir: Path):
    out_dir.mkdir(parents=True, exist_ok=True)
    lock_path = out_dir / ".lock"
    try:
        fd = os.open(lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise ConfigError(f"output directory {out_dir} is locked by another writer") from None
    try:
        os.close(fd)
        yield
    finally:
        lock_path.unlink(missing_ok=True)


def _lexicon(args):
    if getattr(args, "lexicon", None):
        return load_lexicon(resolve_data_path(args.lexicon))
    return default_lexicon()


def _corpus(args, lexicon):
    return load_corpus(resolve_data_path(args.corpus), args.schema, lexicon)


def cmd_lexicon_validate(args) -> int:
    lexicon = _lexicon(args)
    violations = validate_lexicon(lexicon)
    for v in violations:
        print(f"{v.severity}: {v.message}")
    errors = [v for v in violations if v.severity == "error"]
    print(f"{len(lexicon)} entries, {len(errors)} errors, {len(violations) - len(errors)} warnings")
    return 1 if errors else 0


def cmd_corpus_stats(args) -> int:
    from .corpus import ContingencyTable, DegenerateMarginalError, phi_correlation

    lexicon = _lexicon(args)
    report = corpus_stats(_corpus(args, lexicon))
    print(report.render_text())
    try:
        phi = phi_correlation(ContingencyTable.from_stats(report))
        print(f"phi(misogynous, pejorative) = {phi:.2f}")
    except (DegenerateMarginalError, ValueError):
        pass  # degenerate tables have no defined correlation
    return 0


def cmd_match(args) -> int:
    lexicon = _lexicon(args)
    corpus = _corpus(args, lexicon)
    spans = match_corpus(corpus, lexicon, max_edit=args.max_edit)
    out = Path(args.out)
    with output_lock(out):
        write_matches(spans, corpus, out / "matches.jsonl")
        write_manifest(out, RunConfig(corpus_path=args.corpus, schema=args.schema, max_edit=args.max_edit), "match")
    matched = sum(1 for s in spans.values() if s)
    print(f"{matched}/{len(corpus)} tweets matched; spans written to {out / 'matches.jsonl'}")
    return 0


def cmd_enrich(args) -> int:
    lexicon = _lexicon(args)
    corpus = _corpus(args, lexicon)
    spans = match_corpus(corpus, lexicon, max_edit=args.max_edit)
    enrich_spans = spans_for_enrichment(corpus, spans)
    if args.source == "gold":
        assignments = gold_assignments(corpus, spans)
    else:
        if not args.predictions:
            raise ConfigError("--predictions is required with --source predicted")
        records = load_external_predictions(resolve_data_path(args.predictions), corpus, task="pej")
        records = [r for r in records if r.run_id == args.run_id]
        if not records:
            raise ConfigError(f"no predictions with run_id {args.run_id} in {args.predictions}")
        assignments = assignments_from_records(corpus, spans, records)
    result = enrich_corpus(corpus, enrich_spans, assignments, args.strategy, lexicon, args.single_anchor)
    out = Path(args.out)
    with output_lock(out):
        write_enriched(result, out / "enriched.jsonl")
        write_manifest(
            out,
            RunConfig(corpus_path=args.corpus, schema=args.schema, strategy=args.strategy, source=args.source),
            "enrich",
        )
    print(f"enriched corpus written to {out / 'enriched.jsonl'}")
    return 0


def cmd_train(args) -> int:
    lexicon = _lexicon(args)
    corpus = _corpus(args, lexicon)
    spans = match_corpus(corpus, lexicon) if args.task == "pej" else None
    model = train_baseline(corpus, args.task, Hyperparams(), args.seed, spans)
    out = Path(args.out)
    with output_lock(out):
        save_model(model, out / "model.json")
        write_manifest(out, RunConfig(corpus_path=args.corpus, schema=args.schema, seeds=(args.seed,)), "train")
    print(f"model written to {out / 'model.json'}")
    return 0


def cmd_predict(args) -> int:
    lexicon = _lexicon(args)
    corpus = _corpus(args, lexicon)
    if args.split:
        corpus = corpus.subset(args.split)
    model = load_model(resolve_data_path(args.model))
    spans = match_corpus(corpus, lexicon) if model.task == "pej" else None
    records = predict(model, corpus, model.task, args.run_id, spans)
    out = Path(args.out)
    with output_lock(out):
        save_predictions(records, out / "predictions.jsonl")
        write_manifest(out, RunConfig(corpus_path=args.corpus, schema=args.schema), "predict")
    print(f"{len(records)} predictions written to {out / 'predictions.jsonl'}")
    return 0


def cmd_eval(args) -> int:
    lexicon = _lexicon(args)
    corpus = _corpus(args, lexicon)
    split = corpus.subset(args.split) if args.split else corpus
    records = load_external_predictions(resolve_data_path(args.predictions), corpus, task=args.task)
    gold = {
        t.id: bool(t.pejorative if args.task == "pej" else t.misogynous) for t in split
    }
    run_ids = sorted({r.run_id for r in records})
    runs = [
        evaluate_run(gold, [r for r in records if r.run_id == run_id], run_id)
        for run_id in run_ids
    ]
    report = aggregate_runs(runs, args.task, args.approach, args.source, args.subset)
    table = compare_pipelines([report])
    print(table.render_csv() if args.format == "csv" else table.render_text())
    if args.out:
        out = Path(args.out)
        with output_lock(out):
            (out / "report.json").write_text(
                json.dumps(report_to_dict(report), indent=2, sort_keys=True) + "\n", encoding="utf-8"
            )
            write_manifest(out, RunConfig(corpus_path=args.corpus, schema=args.schema), "eval")
    return 0


def cmd_compare(args) -> int:
    reports = []
    for path in args.reports:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        reports.append(report_from_dict(data))
    table = compare_pipelines(reports)
    print(table.render_csv() if args.format == "csv" else table.render_text())
    return 0


def cmd_embed_analyze(args) -> int:
    lexicon = _lexicon(args)
    corpus = _corpus(args, lexicon)
    embeddings = load_embeddings(resolve_data_path(args.embeddings))
    cells = anchor_similarity_table(corpus, lexicon, embeddings)
    summary = class_average_summary(cells)
    frequencies = anchor_frequency(corpus, lexicon)
    out = Path(args.out)
    with output_lock(out):
        (out / "similarity.csv").write_text(similarity_csv(cells), encoding="utf-8")
        (out / "similarity_wide.csv").write_text(similarity_wide_csv(cells), encoding="utf-8")
        (out / "class_averages.json").write_text(
            json.dumps(
                {f"{tag}/{conn}-anchors/{cls}-samples": round(v, 6) for (tag, conn, cls), v in sorted(summary.items())},
                indent=2,
            )
            + "\n",
            encoding="utf-8",
        )
        (out / "anchor_frequency.json").write_text(
            json.dumps(frequencies, ensure_ascii=False, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        write_manifest(out, RunConfig(corpus_path=args.corpus, schema=args.schema), "embed-analyze")
    print(f"{len(cells)} similarity cells written to {out / 'similarity.csv'}")
    return 0


def cmd_prompts_export(args) -> int:
    lexicon = _lexicon(args)
    corpus = _corpus(args, lexicon)
    out = Path(args.out)
    with output_lock(out):
        items = export_prompt_batch(corpus, lexicon, out, model_name=args.model_name)
        write_manifest(out, RunConfig(corpus_path=args.corpus, schema=args.schema), "prompts export")
    print(f"{len(items)} prompts written to {out / 'batch.jsonl'}")
    return 0


def cmd_prompts_ingest(args) -> int:
    batch = load_prompt_batch(resolve_data_path(args.batch))
    records = ingest_responses(resolve_data_path(args.responses), batch)
    corpus = None
    if args.corpus:
        corpus = load_corpus(resolve_data_path(args.corpus), args.schema, default_lexicon())
    print(render_review_table(records, corpus))
    return 0


def cmd_pipeline_run(args) -> int:
    if args.print_config:
        print(default_config_toml())
        return 0
    if not args.config:
        raise ConfigError("--config is required (or use --print-config)")
    cfg = load_config(args.config)
    out = Path(args.out) if args.out else Path(cfg.out_dir)
    with output_lock(out):
        result = run_pipeline(cfg, out)
    print(result.table.render_csv() if cfg.out_format == "csv" else result.table.render_text())
    return 0


def _add_corpus_args(parser, schema_default="pejorativity"):
    parser.add_argument("--corpus", required=True, help="corpus JSONL path")
    parser.add_argument("--schema", default=schema_default, choices=("pejorativity", "ami"))
    parser.add_argument("--lexicon", default="", help="lexicon file (bundled when omitted)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pej", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    lex = sub.add_parser("lexicon", help="lexicon utilities").add_subparsers(dest="subcommand", required=True)
    p = lex.add_parser("validate", help="check lexicon consistency")
    p.add_argument("--lexicon", default="")
    p.set_defaults(func=cmd_lexicon_validate)

    corp = sub.add_parser("corpus", help="corpus utilities").add_subparsers(dest="subcommand", required=True)
    p = corp.add_parser("stats", help="label distribution per split")
    _add_corpus_args(p)
    p.set_defaults(func=cmd_corpus_stats)

    p = sub.add_parser("match", help="locate headwords in a corpus")
    _add_corpus_args(p)
    p.add_argument("--max-edit", type=int, default=1, dest="max_edit")
    p.add_argument("--out", default="out_match")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("enrich", help="inject connotations into tweet text")
    _add_corpus_args(p)
    p.add_argument("--strategy", required=True, choices=("concat", "subst"))
    p.add_argument("--source", default="gold", choices=("gold", "predicted"))
    p.add_argument("--predictions", default="", help="word-level prediction JSONL for --source predicted")
    p.add_argument("--run-id", type=int, default=0, dest="run_id", help="prediction run to apply")
    p.add_argument("--single-anchor", action="store_true", dest="single_anchor")
    p.add_argument("--max-edit", type=int, default=1, dest="max_edit")
    p.add_argument("--out", default="out_enrich")
    p.set_defaults(func=cmd_enrich)

    p = sub.add_parser("train", help="train the in-repo baseline")
    _add_corpus_args(p)
    p.add_argument("--task", required=True, choices=("pej", "mis"))
    p.add_argument("--seed", type=int, default=13)
    p.add_argument("--out", default="out_train")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="score a corpus with a trained model")
    _add_corpus_args(p)
    p.add_argument("--model", required=True)
    p.add_argument("--split", default="", choices=("", "train", "test"))
    p.add_argument("--run-id", type=int, default=0, dest="run_id")
    p.add_argument("--out", default="out_predict")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("eval", help="evaluate prediction records against gold labels")
    _add_corpus_args(p)
    p.add_argument("--predictions", required=True)
    p.add_argument("--task", required=True, choices=("pej", "mis"))
    p.add_argument("--split", default="test", choices=("", "train", "test"))
    p.add_argument("--approach", default="baseline", choices=("baseline", "concat", "subst"))
    p.add_argument("--source", default="n/a", choices=("gold", "predicted", "n/a"))
    p.add_argument("--subset", default="whole", choices=("whole", "epithets"))
    p.add_argument("--format", default="text", choices=("text", "csv"))
    p.add_argument("--out", default="")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compare", help="merge eval reports into one table")
    p.add_argument("reports", nargs="+", help="report.json files from eval")
    p.add_argument("--format", default="text", choices=("text", "csv"))
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("embed-analyze", help="anchor cosine-similarity analysis")
    _add_corpus_args(p)
    p.add_argument("--embeddings", required=True, help="embedding JSONL")
    p.add_argument("--out", default="out_embed")
    p.set_defaults(func=cmd_embed_analyze)

    prompts = sub.add_parser("prompts", help="zero-shot prompt batches").add_subparsers(dest="subcommand", required=True)
    p = prompts.add_parser("export", help="write a prompt batch for the test split")
    _add_corpus_args(p)
    p.add_argument("--out", default="out_prompts")
    p.add_argument("--model-name", default=None, dest="model_name")
    p.set_defaults(func=cmd_prompts_export)
    p = prompts.add_parser("ingest", help="pair responses with exported prompts")
    p.add_argument("--responses", required=True)
    p.add_argument("--batch", required=True, help="batch.jsonl from prompts export")
    p.add_argument("--corpus", default="")
    p.add_argument("--schema", default="pejorativity", choices=("pejorativity", "ami"))
    p.set_defaults(func=cmd_prompts_ingest)

    pipe = sub.add_parser("pipeline", help="end-to-end experiments").add_subparsers(dest="subcommand", required=True)
    p = pipe.add_parser("run", help="five-approach comparison from a TOML config")
    p.add_argument("--config", default="")
    p.add_argument("--out", default="", help="override the configured output directory")
    p.add_argument("--print-config", action="store_true", dest="print_config")
    p.set_defaults(func=cmd_pipeline_run)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
