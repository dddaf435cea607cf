"""End-to-end experiment orchestration driven by a TOML config.

A pipeline run matches the corpus against the lexicon, resolves per-word
connotations (gold labels or a word-level model's predictions), enriches the
text under each strategy, trains and evaluates the sentence-level model per
seed, and emits one comparison table across the five approaches.  Every
artifact is a pure function of the config and inputs: no wall-clock values or
OS entropy enter any output file.
"""

from __future__ import annotations

import hashlib
import json
import os
import sys
from dataclasses import dataclass, asdict
from pathlib import Path
from typing import Mapping, Sequence

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import __version__
from .classifier import (
    DEFAULT_SEEDS,
    Hyperparams,
    PredictionRecord,
    load_external_predictions,
    predict,
    save_predictions,
    train_baseline,
)
from .corpus import Corpus, filter_epithet_subset, load_corpus, match_corpus
from .enrichment import ConnotationAssignment, enrich_corpus, write_enriched
from .evaluation import ComparisonTable, aggregate_runs, compare_pipelines, evaluate_run
from .lexicon import Connotation, default_lexicon, load_lexicon
from .matcher import LemmatizerConfig, MatchSpan


class ConfigError(ValueError):
    """Unusable run configuration (bad values, missing files)."""


APPROACH_PLAN = (
    ("baseline", "n/a"),
    ("concat", "gold"),
    ("concat", "predicted"),
    ("subst", "gold"),
    ("subst", "predicted"),
)

# Training protocol of the external transformer backend, echoed into run
# manifests so results stay traceable to the settings that produced any
# imported prediction files.
EXTERNAL_BACKEND_PROTOCOL = {
    "optimizer": "AdamW",
    "epsilon": 1e-8,
    "epochs": 4,
    "batch_size": 16,
}


@dataclass(frozen=True)
class RunConfig:
    corpus_path: str = "corpus.jsonl"
    schema: str = "pejorativity"
    pej_corpus_path: str = ""  # corpus that trains the word-level model; defaults to corpus_path
    lexicon_path: str = ""  # bundled lexicon when empty
    epithet_subset: bool = False
    lemmatizer: str = "suffix_rules"
    lemma_table: str = ""
    max_edit: int = 1
    strategy: str = "subst"
    source: str = "gold"
    single_anchor: bool = False
    backend: str = "baseline"
    predictions_path: str = ""
    seeds: tuple[int, ...] = DEFAULT_SEEDS
    ngram_min: int = 2
    ngram_max: int = 5
    dim: int = 2**15
    lr: float = 0.5
    epochs: int = 40
    batch_size: int = 32
    l2: float = 1e-4
    out_dir: str = "out"
    out_format: str = "text"

    def hyperparams(self) -> Hyperparams:
        return Hyperparams(
            ngram_min=self.ngram_min,
            ngram_max=self.ngram_max,
            dim=self.dim,
            lr=self.lr,
            epochs=self.epochs,
            batch_size=self.batch_size,
            l2=self.l2,
        )

    def lemmatizer_config(self) -> LemmatizerConfig:
        return LemmatizerConfig(
            mode=self.lemmatizer,
            table_path=self.lemma_table or None,
        )


_CONFIG_LAYOUT = {
    "data": {
        "corpus": "corpus_path",
        "schema": "schema",
        "pej_corpus": "pej_corpus_path",
        "lexicon": "lexicon_path",
        "epithet_subset": "epithet_subset",
    },
    "matcher": {
        "lemmatizer": "lemmatizer",
        "lemma_table": "lemma_table",
        "max_edit": "max_edit",
    },
    "enrich": {
        "strategy": "strategy",
        "source": "source",
        "single_anchor": "single_anchor",
    },
    "classifier": {
        "backend": "backend",
        "predictions": "predictions_path",
        "seeds": "seeds",
        "ngram_min": "ngram_min",
        "ngram_max": "ngram_max",
        "dim": "dim",
        "lr": "lr",
        "epochs": "epochs",
        "batch_size": "batch_size",
        "l2": "l2",
    },
    "output": {
        "dir": "out_dir",
        "format": "out_format",
    },
}


def load_config(path: str | Path) -> RunConfig:
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: invalid TOML: {exc}") from exc
    values: dict[str, object] = {}
    for section, entries in raw.items():
        if section not in _CONFIG_LAYOUT:
            raise ConfigError(f"{path}: unknown config section [{section}]")
        if not isinstance(entries, dict):
            raise ConfigError(f"{path}: section [{section}] must be a table")
        for key, value in entries.items():
            if key not in _CONFIG_LAYOUT[section]:
                raise ConfigError(f"{path}: unknown key {key!r} in [{section}]")
            values[_CONFIG_LAYOUT[section][key]] = value
    if "seeds" in values:
        seeds = values["seeds"]
        if not isinstance(seeds, list) or not seeds or not all(isinstance(s, int) for s in seeds):
            raise ConfigError(f"{path}: seeds must be a non-empty list of integers")
        values["seeds"] = tuple(seeds)
    try:
        cfg = RunConfig(**values)  # type: ignore[arg-type]
    except TypeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    validate_config(cfg)
    return cfg


def validate_config(cfg: RunConfig) -> None:
    if cfg.schema not in ("pejorativity", "ami"):
        raise ConfigError(f"unknown schema {cfg.schema!r}")
    if cfg.strategy not in ("concat", "subst"):
        raise ConfigError(f"unknown strategy {cfg.strategy!r}")
    if cfg.source not in ("gold", "predicted"):
        raise ConfigError(f"unknown source {cfg.source!r}")
    if cfg.backend not in ("baseline", "external"):
        raise ConfigError(f"unknown backend {cfg.backend!r}")
    if cfg.backend == "external" and not cfg.predictions_path:
        raise ConfigError("external backend requires classifier.predictions")
    if not cfg.seeds:
        raise ConfigError("seeds must be non-empty")
    if cfg.out_format not in ("text", "csv"):
        raise ConfigError(f"unknown output format {cfg.out_format!r}")


def default_config_toml() -> str:
    cfg = RunConfig()
    return "\n".join(
        [
            "[data]",
            f'corpus = "{cfg.corpus_path}"',
            f'schema = "{cfg.schema}"',
            f'pej_corpus = "{cfg.pej_corpus_path}"',
            f'lexicon = "{cfg.lexicon_path}"',
            f"epithet_subset = {str(cfg.epithet_subset).lower()}",
            "",
            "[matcher]",
            f'lemmatizer = "{cfg.lemmatizer}"',
            f'lemma_table = "{cfg.lemma_table}"',
            f"max_edit = {cfg.max_edit}",
            "",
            "[enrich]",
            f'strategy = "{cfg.strategy}"',
            f'source = "{cfg.source}"',
            f"single_anchor = {str(cfg.single_anchor).lower()}",
            "",
            "[classifier]",
            f'backend = "{cfg.backend}"',
            f'predictions = "{cfg.predictions_path}"',
            f"seeds = {list(cfg.seeds)}",
            f"ngram_min = {cfg.ngram_min}",
            f"ngram_max = {cfg.ngram_max}",
            f"dim = {cfg.dim}",
            f"lr = {cfg.lr}",
            f"epochs = {cfg.epochs}",
            f"batch_size = {cfg.batch_size}",
            f"l2 = {cfg.l2}",
            "",
            "[output]",
            f'dir = "{cfg.out_dir}"',
            f'format = "{cfg.out_format}"',
            "",
        ]
    )


def resolve_data_path(path: str) -> Path:
    """Resolve a data path, falling back to $PEJ_DATA_DIR for external corpora."""
    p = Path(path)
    if p.exists():
        return p
    data_dir = os.environ.get("PEJ_DATA_DIR")
    if data_dir:
        candidate = Path(data_dir) / path
        if candidate.exists():
            return candidate
    raise ConfigError(f"data file not found: {path}")


def config_hash(cfg: RunConfig) -> str:
    canonical = json.dumps(asdict(cfg), sort_keys=True)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def write_manifest(out_dir: Path, cfg: RunConfig, command: str) -> None:
    manifest = {
        "command": command,
        "config": asdict(cfg),
        "config_hash": config_hash(cfg),
        "seeds": list(cfg.seeds),
        "version": __version__,
        "external_backend_protocol": EXTERNAL_BACKEND_PROTOCOL,
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def write_matches(spans_by_id: Mapping[str, Sequence[MatchSpan]], corpus: Corpus, path: Path) -> None:
    lines = []
    for tweet in corpus:
        for span in spans_by_id.get(tweet.id, ()):
            lines.append(
                json.dumps(
                    {
                        "id": tweet.id,
                        "char_start": span.char_start,
                        "char_end": span.char_end,
                        "surface": span.surface,
                        "headword": span.headword,
                    },
                    ensure_ascii=False,
                )
            )
    path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def enrichable_spans(tweet, spans: Sequence[MatchSpan]) -> list[MatchSpan]:
    """Spans eligible for connotation assignment: restricted to the tweet's
    target word when one is set, since the word-level label refers to it."""
    spans = list(spans)
    if tweet.target_word:
        restricted = [s for s in spans if s.headword == tweet.target_word]
        return restricted or spans
    return spans


def gold_assignments(corpus: Corpus, spans_by_id: Mapping[str, Sequence[MatchSpan]]) -> dict[str, ConnotationAssignment]:
    assignments = {}
    for tweet in corpus:
        spans = enrichable_spans(tweet, spans_by_id.get(tweet.id, ()))
        if not spans:
            continue
        if tweet.pejorative is None:
            raise ConfigError(f"gold source requires word-level labels; tweet {tweet.id!r} has none")
        connotation = Connotation.PEJORATIVE if tweet.pejorative else Connotation.NEUTRAL
        assignments[tweet.id] = ConnotationAssignment(
            tweet_id=tweet.id, spans={s: connotation for s in spans}, source="gold"
        )
    return assignments


def assignments_from_records(
    corpus: Corpus,
    spans_by_id: Mapping[str, Sequence[MatchSpan]],
    records: Sequence[PredictionRecord],
) -> dict[str, ConnotationAssignment]:
    by_id = {r.id: r for r in records}
    assignments = {}
    for tweet in corpus:
        spans = enrichable_spans(tweet, spans_by_id.get(tweet.id, ()))
        if not spans:
            continue
        record = by_id.get(tweet.id)
        if record is None:
            raise ConfigError(f"no word-level prediction for matched tweet {tweet.id!r}")
        connotation = Connotation.PEJORATIVE if record.label else Connotation.NEUTRAL
        assignments[tweet.id] = ConnotationAssignment(
            tweet_id=tweet.id, spans={s: connotation for s in spans}, source="predicted"
        )
    return assignments


@dataclass
class PipelineResult:
    table: ComparisonTable
    out_dir: Path


def spans_for_enrichment(corpus: Corpus, spans_by_id: Mapping[str, Sequence[MatchSpan]]) -> dict[str, list[MatchSpan]]:
    return {t.id: enrichable_spans(t, spans_by_id.get(t.id, ())) for t in corpus}


def run_pipeline(cfg: RunConfig, out_dir: str | Path | None = None) -> PipelineResult:
    """Run the five-approach comparison and write artifacts under out_dir."""
    out = Path(out_dir) if out_dir is not None else Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    lexicon = load_lexicon(resolve_data_path(cfg.lexicon_path)) if cfg.lexicon_path else default_lexicon()
    lemcfg = cfg.lemmatizer_config()
    corpus = load_corpus(resolve_data_path(cfg.corpus_path), cfg.schema, lexicon)
    subset_tag = "whole"
    if cfg.epithet_subset:
        corpus = filter_epithet_subset(corpus, lexicon, lemcfg, cfg.max_edit)
        subset_tag = "epithets"

    spans_by_id = match_corpus(corpus, lexicon, lemcfg, cfg.max_edit)
    write_matches(spans_by_id, corpus, out / "matches.jsonl")
    enrich_spans = spans_for_enrichment(corpus, spans_by_id)

    hp = cfg.hyperparams()
    test_split = corpus.subset("test")
    gold_mis = {t.id: bool(t.misogynous) for t in test_split}

    # Word-level connotation predictions per seed (in-repo model or external file).
    predicted_by_seed: dict[int, dict[str, ConnotationAssignment]] = {}
    if cfg.backend == "external":
        records = load_external_predictions(resolve_data_path(cfg.predictions_path), corpus, task="pej")
        runs = sorted({r.run_id for r in records})
        if len(runs) < len(cfg.seeds):
            raise ConfigError(f"external predictions cover runs {runs}, need {len(cfg.seeds)}")
        for seed, run_id in zip(cfg.seeds, runs):
            subset = [r for r in records if r.run_id == run_id]
            predicted_by_seed[seed] = assignments_from_records(corpus, spans_by_id, subset)
    else:
        pej_corpus = corpus
        pej_spans = spans_by_id
        if cfg.pej_corpus_path and cfg.pej_corpus_path != cfg.corpus_path:
            pej_corpus = load_corpus(resolve_data_path(cfg.pej_corpus_path), "pejorativity", lexicon)
            pej_spans = match_corpus(pej_corpus, lexicon, lemcfg, cfg.max_edit)
        for run_id, seed in enumerate(cfg.seeds):
            model = train_baseline(pej_corpus, "pej", hp, seed, pej_spans)
            records = predict(model, corpus, "pej", run_id, spans_by_id)
            save_predictions(records, out / f"pej_predictions_seed{seed}.jsonl")
            predicted_by_seed[seed] = assignments_from_records(corpus, spans_by_id, records)

    gold = gold_assignments(corpus, spans_by_id) if corpus.schema == "pejorativity" else None

    reports = []
    for approach, source in APPROACH_PLAN:
        if source == "gold" and gold is None:
            continue
        run_metrics = []
        for run_id, seed in enumerate(cfg.seeds):
            if approach == "baseline":
                variant = corpus
            else:
                assignments = gold if source == "gold" else predicted_by_seed[seed]
                assert assignments is not None
                result = enrich_corpus(
                    corpus, enrich_spans, assignments, approach, lexicon, cfg.single_anchor
                )
                variant = result.corpus
                if source == "gold":
                    if run_id == 0:  # gold enrichment is seed-independent
                        write_enriched(result, out / f"enriched_{approach}_gold.jsonl")
                else:
                    write_enriched(result, out / f"enriched_{approach}_{source}_seed{seed}.jsonl")
            model = train_baseline(variant, "mis", hp, seed)
            records = predict(model, variant.subset("test"), "mis", run_id)
            label = f"{approach}_{source}".replace("/", "-")
            save_predictions(records, out / f"mis_predictions_{label}_seed{seed}.jsonl")
            run_metrics.append(evaluate_run(gold_mis, records, run_id))
        reports.append(aggregate_runs(run_metrics, "mis", approach, source, subset_tag))

    table = compare_pipelines(reports)
    (out / "comparison.txt").write_text(table.render_text() + "\n", encoding="utf-8")
    (out / "comparison.csv").write_text(table.render_csv(), encoding="utf-8")
    write_manifest(out, cfg, "pipeline run")
    return PipelineResult(table=table, out_dir=out)
