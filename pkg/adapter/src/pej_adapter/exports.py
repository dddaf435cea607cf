"""Exports in the toolkit's JSONL schemas: predictions, tokenizations, embeddings."""

from __future__ import annotations

from pathlib import Path

import torch

from .config import AdapterConfig
from .data import Span, Tweet, write_jsonl
from .modeling import encode_batch, load_classifier, load_encoder, load_tokenizer


@torch.no_grad()
def export_predictions(
    checkpoint: str | Path,
    tweets: list[Tweet],
    task: str,
    run_id: int,
    out_path: str | Path,
    config: AdapterConfig | None = None,
    batch_size: int = 32,
) -> list[dict]:
    """One record per tweet: {"id", "task", "label", "score", "run_id"}."""
    config = config or AdapterConfig()
    tokenizer = load_tokenizer(str(checkpoint))
    model = load_classifier(str(checkpoint))
    model.eval()
    records = []
    for start in range(0, len(tweets), batch_size):
        chunk = tweets[start : start + batch_size]
        encodings = encode_batch(tokenizer, chunk, task, config.max_length)
        probs = torch.softmax(model(**encodings).logits, dim=-1)[:, 1]
        for tweet, p in zip(chunk, probs.tolist()):
            records.append(
                {"id": tweet.id, "task": task, "label": bool(p >= 0.5), "score": float(p), "run_id": run_id}
            )
    write_jsonl(out_path, records)
    return records


def export_tokenizations(
    model_name_or_dir: str,
    tweets: list[Tweet],
    out_path: str | Path,
) -> list[dict]:
    """Subword pieces with character offsets: {"id", "pieces": [[piece, start, end]]}.

    Special tokens and padding carry empty offsets and are dropped.
    """
    tokenizer = load_tokenizer(model_name_or_dir)
    records = []
    for tweet in tweets:
        encoding = tokenizer(tweet.text, return_offsets_mapping=True, add_special_tokens=True)
        pieces = []
        for token, (start, end) in zip(
            tokenizer.convert_ids_to_tokens(encoding["input_ids"]), encoding["offset_mapping"]
        ):
            if start == end:
                continue
            pieces.append([token, start, end])
        records.append({"id": tweet.id, "pieces": pieces})
    write_jsonl(out_path, records)
    return records


@torch.no_grad()
def _pooled_vector(encoder, tokenizer, text: str, layer: int, char_range=None, max_length: int = 128):
    encoding = tokenizer(
        text, return_offsets_mapping=True, truncation=True, max_length=max_length, return_tensors="pt"
    )
    offsets = encoding.pop("offset_mapping")[0].tolist()
    hidden = encoder(**encoding, output_hidden_states=True).hidden_states[layer][0]
    indices = []
    for i, (start, end) in enumerate(offsets):
        if start == end:
            continue  # special token
        if char_range is None or (start < char_range[1] and end > char_range[0]):
            indices.append(i)
    if not indices:
        return None
    return hidden[indices].mean(dim=0).tolist()


def export_embeddings(
    model_name_or_dir: str,
    model_tag: str,
    tweets: list[Tweet],
    spans: list[Span],
    anchors: dict[str, list[str]],
    out_path: str | Path,
    config: AdapterConfig | None = None,
) -> list[dict]:
    """Mean-pooled span embeddings plus isolated-anchor reference vectors.

    Occurrence ids follow the toolkit convention "{tweet_id}:{start}-{end}";
    anchor ids are "anchor:{word}".  ``model_tag`` marks the model stage
    (pretrained base vs fine-tuned checkpoint).
    """
    config = config or AdapterConfig()
    tokenizer = load_tokenizer(model_name_or_dir)
    encoder = load_encoder(model_name_or_dir)
    encoder.eval()
    by_tweet = {t.id: t for t in tweets}
    records = []
    for span in spans:
        tweet = by_tweet.get(span.tweet_id)
        if tweet is None:
            continue
        vector = _pooled_vector(
            encoder,
            tokenizer,
            tweet.text,
            config.embedding_layer,
            (span.char_start, span.char_end),
            config.max_length,
        )
        if vector is None:
            continue
        records.append(
            {
                "id": f"{span.tweet_id}:{span.char_start}-{span.char_end}",
                "kind": "lexicon_occurrence",
                "word": span.headword,
                "model_tag": model_tag,
                "vector": vector,
            }
        )
    matched_heads = {span.headword for span in spans}
    anchor_words = sorted(
        {
            anchor
            for headword, words in anchors.items()
            if not matched_heads or headword in matched_heads
            for anchor in words
        }
    )
    for anchor in anchor_words:
        vector = _pooled_vector(encoder, tokenizer, anchor, config.embedding_layer, None, config.max_length)
        if vector is None:
            continue
        records.append(
            {
                "id": f"anchor:{anchor}",
                "kind": "anchor",
                "word": anchor,
                "model_tag": model_tag,
                "vector": vector,
            }
        )
    write_jsonl(out_path, records)
    return records
