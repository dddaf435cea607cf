#!/usr/bin/env python3
"""Cross-component smoke run: tiny transformer -> exports -> toolkit loaders.

Fine-tunes a small randomly initialized local model on a 32-tweet corpus,
exports predictions, tokenizations, and embeddings through the adapter, and
validates every file with the main toolkit's readers.  Requires the adapter
package (pip install -e adapter/).

Usage: python scripts/run_adapter_smoke.py [--out DIR]
"""

import argparse
from pathlib import Path

from pej_adapter.config import AdapterConfig
from pej_adapter.data import read_corpus, read_lexicon_anchors, read_matches
from pej_adapter.exports import export_embeddings, export_predictions, export_tokenizations
from pej_adapter.finetune import finetune
from pej_adapter.modeling import make_tiny_model

from pejoratives.classifier import load_external_predictions
from pejoratives.cli import main as pej_main
from pejoratives.corpus import load_corpus, save_corpus
from pejoratives.embeddings import anchor_similarity_table, load_embeddings, similarity_csv
from pejoratives.fixtures import pipeline_corpus
from pejoratives.lexicon import bundled_lexicon_path, default_lexicon


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="adapter_smoke", help="output directory")
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    corpus_path = out / "smoke.jsonl"
    save_corpus(pipeline_corpus(n=32, test_size=8), corpus_path)
    tweets = read_corpus(corpus_path)

    anchors = read_lexicon_anchors(bundled_lexicon_path())
    model_dir = make_tiny_model(out / "tiny_model", [t.text for t in tweets] + [a for ws in anchors.values() for a in ws])
    config = AdapterConfig(model_name=str(model_dir), max_length=64)

    checkpoint = finetune(tweets, "pej", config, out / "ckpt", epochs=1)
    print(f"fine-tuned checkpoint: {checkpoint}")

    preds_path = out / "predictions.jsonl"
    export_predictions(checkpoint, tweets, "pej", 0, preds_path, config)
    corpus = load_corpus(corpus_path, "pejorativity")
    records = load_external_predictions(preds_path, corpus, task="pej")
    print(f"predictions validate: {len(records)} records")

    export_tokenizations(str(model_dir), tweets, out / "tokenizations.jsonl")
    print("tokenizations written")

    match_dir = out / "match"
    pej_main(["match", "--corpus", str(corpus_path), "--out", str(match_dir)])
    spans = read_matches(match_dir / "matches.jsonl")
    embedding_records = []
    for tag, source in (("pretrained", str(model_dir)), ("finetuned", str(checkpoint))):
        embedding_records += export_embeddings(
            source, tag, tweets, spans, anchors, out / f"embeddings_{tag}.jsonl", config
        )
    combined = out / "embeddings.jsonl"
    from pej_adapter.data import write_jsonl

    write_jsonl(combined, embedding_records)
    cells = anchor_similarity_table(corpus, default_lexicon(), load_embeddings(combined))
    (out / "similarity.csv").write_text(similarity_csv(cells), encoding="utf-8")
    print(f"embeddings validate: {len(embedding_records)} records, {len(cells)} similarity cells")
    print(f"all artifacts under {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
